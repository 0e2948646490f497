#include "conelab/fourier.hpp"

#include "conelab/errors.hpp"

#include <cmath>

namespace conelab {

double FourierHarmonic::evaluate(double r, double theta) const {
    if (coefficients.empty()) {
        return 0.0;
    }
    const double a0 = coefficients[0][0];
    if (r == 0.0) {
        return a0; // only the constant mode survives at the vertex
    }
    const double w = 2.0 * std::numbers::pi / cone.length;
    double sum = a0;
    for (std::size_t k = 1; k < coefficients.size(); ++k) {
        const double ak = coefficients[k][0];
        const double bk = coefficients[k][1];
        if (ak == 0.0 && bk == 0.0) {
            continue;
        }
        const double kk = static_cast<double>(k);
        const double phase = w * kk * theta;
        sum += std::pow(r, w * kk) *
               (ak * std::cos(phase) + bk * std::sin(phase));
    }
    return sum;
}

FourierHarmonic FourierHarmonic::mode(const ConeParams& cone, std::size_t k,
                                      double a, double b) {
    FourierHarmonic h{cone, {}};
    h.coefficients.assign(k + 1, {0.0, 0.0});
    h.coefficients[k] = {a, b};
    return h;
}

FourierHarmonic fit_dirichlet(std::span<const double> boundary_values, double R,
                              const ConeParams& cone, std::size_t K) {
    const std::size_t n = boundary_values.size();
    if (n < 2 * K + 2) {
        throw config_error("fit_dirichlet: need at least 2K+2 samples to avoid aliasing");
    }
    if (!(R > 0.0)) {
        throw config_error("fit_dirichlet: need R > 0");
    }
    FourierHarmonic h{cone, {}};
    h.coefficients.assign(K + 1, {0.0, 0.0});
    const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
    double a0 = 0.0;
    for (double v : boundary_values) {
        a0 += v;
    }
    h.coefficients[0][0] = a0 / static_cast<double>(n);
    for (std::size_t k = 1; k <= K; ++k) {
        double ca = 0.0, sa = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            // Midpoint sample positions; cancels the leading aliasing error
            // of discontinuous data such as the sawtooth.
            const double phase = w * static_cast<double>(k) *
                                 (static_cast<double>(j) + 0.5);
            ca += boundary_values[j] * std::cos(phase);
            sa += boundary_values[j] * std::sin(phase);
        }
        const double scale =
            2.0 / (static_cast<double>(n) *
                   std::pow(R, cone.holder_exponent() * static_cast<double>(k)));
        h.coefficients[k] = {scale * ca, scale * sa};
    }
    return h;
}

double dirichlet_energy_closed_form(const FourierHarmonic& h, double r) {
    if (!(r > 0.0)) {
        throw config_error("dirichlet_energy_closed_form: need r > 0");
    }
    const double w = 2.0 * std::numbers::pi / h.cone.length;
    double sum = 0.0;
    for (std::size_t k = 1; k < h.coefficients.size(); ++k) {
        const double ak = h.coefficients[k][0];
        const double bk = h.coefficients[k][1];
        if (ak == 0.0 && bk == 0.0) {
            continue;
        }
        const double kk = static_cast<double>(k);
        sum += kk * std::pow(r, 2.0 * w * kk) * (ak * ak + bk * bk);
    }
    return std::numbers::pi * sum;
}

MonotoneScan scaled_energy_scan(const FourierHarmonic& h, double alpha,
                                std::span<const double> radii) {
    std::vector<double> rs(radii.begin(), radii.end());
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
        if (!(rs[i] > 0.0) || !(rs[i] < rs[i + 1])) {
            throw config_error("scaled_energy_scan: radii must be positive and strictly increasing");
        }
    }
    std::vector<double> vals;
    vals.reserve(rs.size());
    for (double r : rs) {
        vals.push_back(std::pow(r, -2.0 * alpha) * dirichlet_energy_closed_form(h, r));
    }
    return make_scan(std::move(rs), std::move(vals), 1e-12, /*relative=*/true);
}

double sup_abs_on_circle(const FourierHarmonic& h, double r, std::size_t samples) {
    double best = 0.0;
    const double dt = h.cone.length / static_cast<double>(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        best = std::max(best, std::abs(h.evaluate(r, dt * static_cast<double>(j))));
    }
    return best;
}

} // namespace conelab
