#pragma once

#include "conelab/minimize.hpp"
#include "conelab/polar_grid.hpp"
#include "conelab/scan.hpp"

#include <span>

namespace conelab {

/// Product Phi(r) = r^(-2 alpha) * D(C_r, u+) * D(C_r, u-) for a
/// disjoint-support nonnegative pair, sampled over increasing radii.
/// Nondecreasing for alpha <= 4 pi / l; larger exponents are rejected
/// unless `force_alpha` is set (contrapositive experiments).  A negative
/// tolerance selects 3x the discretization estimate (dr / r_min) * max Phi.
MonotoneScan acf_phi(const ScalarField& u_plus, const ScalarField& u_minus,
                     double alpha, std::span<const double> radii,
                     bool force_alpha = false, double tolerance = -1.0);

/// W(C_r, u) = r^-2 J(C_r, u) - r^-1 integral_0^r f(t) dt with
/// f(t) = integral over the unit section of the squared radial derivative
/// at radius t.  The radial quadrature starts at t = dr (the derivative has
/// no meaning at the vertex); r snaps to the nearest grid ring.  Requires
/// u(vertex) = 0.  Constant in r exactly when u is 1-homogeneous.
double weiss_energy(const ScalarField& u, const ProblemSpec& spec, double r);

/// Weiss scan over increasing radii; negative tolerance selects
/// 1e-3 * max |W|.
MonotoneScan weiss_scan(const ScalarField& u, const ProblemSpec& spec,
                        std::span<const double> radii, double tolerance = -1.0);

/// Defect of the rescaling identity for u_r(x) = u(r x)/r.  The corrected
/// form compares W(C_R, u_r) with W(C_{rR}, u); the literal form compares
/// against W(C_{rR}, u_r) instead and is reported without being asserted.
struct WeissRescalingCheck {
    double corrected = 0.0;
    double literal = 0.0;
};

WeissRescalingCheck weiss_rescaling_check(const ScalarField& u,
                                          const ProblemSpec& spec, double r,
                                          double R);

} // namespace conelab
