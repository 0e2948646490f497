#pragma once

#include "conelab/cone.hpp"
#include "conelab/polar_grid.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace conelab {

struct FreeBoundary {
    std::vector<std::vector<ConePoint>> polylines;
    double vertex_distance = std::numeric_limits<double>::infinity();

    bool empty() const { return polylines.empty(); }
};

/// Zero contour of u per polar cell (marching squares in (r, theta) with
/// seam wrap; the ring-0 cells are triangles with the vertex as apex), run
/// on both phase masks {u > 0} and {u < 0} and deduplicated.
/// vertex_distance is the min r over contour points; it is 0 when the
/// vertex value is 0 and ring 1 carries both signs.
FreeBoundary extract_free_boundary(const ScalarField& u);

/// Grid-honest vertex membership: the contour reaches r <= dr, or the
/// vertex value is 0 with both signs on ring 1.
bool passes_through_vertex(const ScalarField& u, const FreeBoundary& fb);

struct FluxJump {
    double measured = 0.0; // |Du+|^2 - |Du-|^2 at the probe point
    double target = 0.0;   // lambda_+^2 - lambda_-^2
    double grad_plus = 0.0;
    double grad_minus = 0.0;
};

/// One-sided normal-derivative estimates at a free boundary point by
/// quadratic fits through samples at distances {d, 2d, 3d}, d =
/// probe_radius/3, along the interpolated-gradient normal on each side.
/// The point must sit more than 4*probe_radius from the vertex and from
/// the outer boundary.
FluxJump flux_jump_check(const ScalarField& u, const ConePoint& fb_point,
                         double probe_radius, double lambda_plus,
                         double lambda_minus);

/// u_rho(x) = u(rho x) / rho resampled onto a fresh grid of the same shape;
/// requires rho * n_r >= 8 so the source ball keeps at least 8 rings.
ScalarField blow_up_rescale(const ScalarField& u, double rho);

struct AnnulusRow {
    double r_inner = 0.0;
    double sup_grad = 0.0; // sup |Du| over cells with midpoint in [r, 2r)
};

struct RegularityReport {
    std::vector<AnnulusRow> annuli;
    double fitted_exponent = 0.0; // log-log slope of sup |Du| vs r
    double holder_beta = 0.0;
    double holder_quotient = 0.0; // max |u(x)-u(y)| / d(x,y)^beta, sampled
    bool lipschitz_certified = false;
};

/// Gradient-growth table on dyadic annuli plus a sampled Hoelder quotient.
/// beta < 0 selects the default exponent min(1, 2pi/l)/2; the Lipschitz
/// certificate is granted for l <= 2pi when no inverse-power growth is
/// observed (fitted exponent > -0.1).
RegularityReport regularity_scan(const ScalarField& u, double beta = -1.0);

struct BarrierProfile {
    double r0 = 0.0;
    double lambda_plus = 0.0;

    /// phi(r) = lambda_+ r0 ln^+(r0 / r).
    double operator()(double r) const {
        return r >= r0 ? 0.0 : lambda_plus * r0 * std::log(r0 / r);
    }
};

enum class BarrierVariant {
    corrected, // lambda_+ r0 ln(eps/r0) = delta, larger root in (0, eps)
    literal,   // lambda_+ r0 ln(r0/eps) = delta, single root above eps
};

/// Solves the barrier root equation by bisection.  The corrected variant
/// has no root when delta > lambda_+ eps / e (the maximum of r ln(eps/r)).
BarrierProfile barrier_radius(double delta, double eps, double lambda_plus,
                              BarrierVariant variant = BarrierVariant::corrected);

} // namespace conelab
