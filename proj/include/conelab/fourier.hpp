#pragma once

#include "conelab/cone.hpp"
#include "conelab/scan.hpp"

#include <span>
#include <vector>

namespace conelab {

/// Finite harmonic expansion on the cone:
///   h(r, theta) = sum_k r^(2*pi*k/l) (a_k cos(2*pi*k*theta/l)
///                                   + b_k sin(2*pi*k*theta/l)).
/// Every finite sum is exactly harmonic away from the vertex; the class is
/// the exact-answer bed for the energy and monotonicity checks.
struct FourierHarmonic {
    ConeParams cone;
    /// coefficients[k] = {a_k, b_k}; b_0 is ignored (sin 0 = 0).
    std::vector<std::array<double, 2>> coefficients;

    double evaluate(double r, double theta) const;
    double evaluate(const ConePoint& p) const { return evaluate(p.r, p.theta); }

    /// Convenience: single-mode harmonic a_k = amplitude.
    static FourierHarmonic mode(const ConeParams& cone, std::size_t k,
                                double a, double b = 0.0);
};

/// Discrete Fourier projection of boundary samples on the circle r = R.
/// Samples are taken at the midpoints theta_j = (j + 1/2) l / N; the result
/// reproduces the samples up to the aliasing of modes above K and is exactly
/// harmonic by construction.  Rejects K when 2K + 2 exceeds the sample count.
FourierHarmonic fit_dirichlet(std::span<const double> boundary_values, double R,
                              const ConeParams& cone, std::size_t K);

/// D(C_r, h) = pi * sum_k k r^(4*pi*k/l) (a_k^2 + b_k^2), the closed-form
/// Dirichlet integral over the cone ball of radius r.
double dirichlet_energy_closed_form(const FourierHarmonic& h, double r);

/// Scan of r^(-2*alpha) D(C_r, h) over the given radii; nondecreasing for
/// alpha in (0, 2*pi/l] since every term carries the exponent
/// 4*pi*k/l - 2*alpha >= 0.  Violations beyond 1e-12 relative are reported.
MonotoneScan scaled_energy_scan(const FourierHarmonic& h, double alpha,
                                std::span<const double> radii);

/// max over the circle r' = r of |h| on a dense uniform theta sample; the
/// Hoelder-rate checks divide this by r^(2*pi/l).
double sup_abs_on_circle(const FourierHarmonic& h, double r,
                         std::size_t samples = 4096);

} // namespace conelab
