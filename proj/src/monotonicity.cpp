#include "conelab/monotonicity.hpp"

#include "conelab/diagnostics.hpp"
#include "conelab/energy.hpp"
#include "conelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conelab {

namespace {

void check_radii(std::span<const double> radii, double R) {
    if (radii.empty()) {
        throw config_error("scan: no radii");
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || radii[i] > R * (1.0 + 1e-12)) {
            throw config_error("scan: radii must lie in (0, R]");
        }
        if (i > 0 && radii[i] <= radii[i - 1]) {
            throw config_error("scan: radii must increase");
        }
    }
}

/// Section integral of the squared radial derivative at every ring,
/// f[i] = sum_j (du/dr)(r_i, theta_j)^2 dtheta; centered differences with
/// the vertex as the r = 0 sample, one-sided on the outer ring.
std::vector<double> radial_derivative_sections(const ScalarField& u) {
    const PolarGrid& g = u.grid;
    const double dr = g.dr();
    const double dt = g.dtheta();
    std::vector<double> f(g.n_r + 1, 0.0);
    for (int i = 1; i <= g.n_r; ++i) {
        double acc = 0.0;
        for (int j = 0; j < g.n_theta; ++j) {
            double d;
            if (i < g.n_r) {
                const double lo = i == 1 ? u.vertex() : u.at(i - 1, j);
                d = (u.at(i + 1, j) - lo) / (2.0 * dr);
            } else {
                d = (u.at(i, j) - u.at(i - 1, j)) / dr;
            }
            acc += d * d;
        }
        f[i] = acc * dt;
    }
    return f;
}

} // namespace

MonotoneScan acf_phi(const ScalarField& u_plus, const ScalarField& u_minus,
                     double alpha, std::span<const double> radii,
                     bool force_alpha, double tolerance) {
    const PolarGrid& g = u_plus.grid;
    if (!g.same_shape(u_minus.grid)) {
        throw config_error("acf_phi: factors live on different grids");
    }
    const double l = g.cone.length;
    if (l > 2.0 * std::numbers::pi + 1e-12) {
        throw config_error("acf_phi: cone length must not exceed 2 pi");
    }
    if (!(alpha > 0.0)) {
        throw config_error("acf_phi: exponent must be positive");
    }
    if (!force_alpha && alpha > 4.0 * std::numbers::pi / l + 1e-12) {
        throw config_error(
            "acf_phi: exponent exceeds 4 pi / l; pass force_alpha to scan anyway");
    }
    check_radii(radii, g.R);

    double scale = 0.0;
    for (std::size_t n = 0; n < u_plus.values.size(); ++n) {
        scale = std::max({scale, u_plus.values[n], -u_minus.values[n]});
    }
    const double sign_tol = 1e-14 * std::max(1.0, scale);
    for (std::size_t n = 0; n < u_plus.values.size(); ++n) {
        if (u_plus.values[n] < -sign_tol || u_minus.values[n] < -sign_tol) {
            throw config_error("acf_phi: factors must be nonnegative");
        }
        if (u_plus.values[n] > sign_tol && u_minus.values[n] > sign_tol) {
            throw config_error("acf_phi: factors must have disjoint supports");
        }
    }

    std::vector<double> values;
    values.reserve(radii.size());
    double max_phi = 0.0;
    for (const double r : radii) {
        const double dp = discrete_energy_parts(u_plus, r).dirichlet;
        const double dm = discrete_energy_parts(u_minus, r).dirichlet;
        const double phi = std::pow(r, -2.0 * alpha) * dp * dm;
        values.push_back(phi);
        max_phi = std::max(max_phi, std::abs(phi));
    }
    if (tolerance < 0.0) {
        tolerance = 3.0 * g.dr() / std::max(radii.front(), g.dr()) * max_phi;
    }
    return make_scan({radii.begin(), radii.end()}, std::move(values), tolerance,
                     false);
}

double weiss_energy(const ScalarField& u, const ProblemSpec& spec, double r) {
    const PolarGrid& g = u.grid;
    if (std::abs(g.cone.length - spec.cone.length) > 1e-12) {
        throw config_error("weiss_energy: field and problem cones differ");
    }
    double sup = 0.0;
    for (const double v : u.values) {
        sup = std::max(sup, std::abs(v));
    }
    if (std::abs(u.vertex()) > 1e-9 * std::max(1.0, sup)) {
        throw config_error("weiss_energy: field does not vanish at the vertex");
    }
    const double dr = g.dr();
    const int m = static_cast<int>(std::llround(r / dr));
    if (m < 1 || m > g.n_r || std::abs(r - m * dr) > 1e-9 * g.R) {
        throw config_error("weiss_energy: radius must sit on a grid ring");
    }
    const double r_eff = m * dr;

    const double bulk =
        discrete_energy(u, spec.lambda_plus, spec.lambda_minus, r_eff);

    const std::vector<double> f = radial_derivative_sections(u);
    double integral = dr * f[1]; // rectangle over (0, dr]
    for (int i = 1; i < m; ++i) {
        integral += 0.5 * (f[i] + f[i + 1]) * dr;
    }
    return bulk / (r_eff * r_eff) - integral / r_eff;
}

MonotoneScan weiss_scan(const ScalarField& u, const ProblemSpec& spec,
                        std::span<const double> radii, double tolerance) {
    check_radii(radii, u.grid.R);
    std::vector<double> values;
    values.reserve(radii.size());
    double sup = 0.0;
    for (const double r : radii) {
        values.push_back(weiss_energy(u, spec, r));
        sup = std::max(sup, std::abs(values.back()));
    }
    if (tolerance < 0.0) {
        tolerance = 1e-3 * sup;
    }
    return make_scan({radii.begin(), radii.end()}, std::move(values), tolerance,
                     false);
}

WeissRescalingCheck weiss_rescaling_check(const ScalarField& u,
                                          const ProblemSpec& spec, double r,
                                          double R) {
    const ScalarField u_r = blow_up_rescale(u, r);
    const double outer = weiss_energy(u_r, spec, R);
    WeissRescalingCheck check;
    check.corrected = std::abs(outer - weiss_energy(u, spec, r * R));
    check.literal = std::abs(outer - weiss_energy(u_r, spec, r * R));
    return check;
}

} // namespace conelab
