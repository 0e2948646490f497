#include "conelab/examples.hpp"

#include "conelab/energy.hpp"
#include "conelab/errors.hpp"
#include "conelab/replace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>

namespace conelab {

namespace {

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// One alternating harmonic replacement of both strict-sign regions, the
/// inner proposal of the descent machinery.
ScalarField replaced_phases(const ScalarField& u, double tol) {
    const PolarGrid& g = u.grid;
    std::vector<std::uint8_t> pos(g.n_nodes(), 0);
    std::vector<std::uint8_t> neg(g.n_nodes(), 0);
    ScalarField up(g);
    ScalarField un(g);
    for (std::size_t n = 0; n < g.n_nodes(); ++n) {
        up.values[n] = std::max(u.values[n], 0.0);
        un.values[n] = std::max(-u.values[n], 0.0);
        if (g.ring_of(n) < g.n_r) {
            pos[n] = u.values[n] > 0.0 ? 1 : 0;
            neg[n] = u.values[n] < 0.0 ? 1 : 0;
        }
    }
    const ScalarField rp = harmonic_replacement(up, pos, tol).field;
    const ScalarField rn = harmonic_replacement(un, neg, tol).field;
    ScalarField out(g);
    for (std::size_t n = 0; n < g.n_nodes(); ++n) {
        out.values[n] = std::max(rp.values[n], 0.0) - std::max(rn.values[n], 0.0);
    }
    return out;
}

} // namespace

ScalarField slit_transplant(const PolarGrid& grid) {
    return multi_phase_paste(grid, 1, 2.0 * std::numbers::pi);
}

ScalarField multi_phase_paste(const PolarGrid& grid, int k, double min_length) {
    if (k < 1) {
        throw config_error("multi_phase_paste: need at least one phase");
    }
    const double l = grid.cone.length;
    if (min_length < 0.0) {
        min_length = 2.0 * std::numbers::pi * k;
    }
    if (l < min_length - 1e-12) {
        throw config_error(
            "multi_phase_paste: cone too short for the requested phases");
    }
    ScalarField u(grid);
    for (int i = 1; i <= grid.n_r; ++i) {
        const double r = grid.r_of(i);
        for (int j = 0; j < grid.n_theta; ++j) {
            const double theta = grid.theta_of(j);
            double value = 0.0;
            for (int m = 0; m < k; ++m) {
                const double center = (2 * m + 1) * l / (2 * k);
                double delta = std::fmod(theta - center, l);
                if (delta < -l / 2) {
                    delta += l;
                } else if (delta > l / 2) {
                    delta -= l;
                }
                if (std::abs(delta) < std::numbers::pi / 2) {
                    value = r * std::cos(delta);
                    break; // sectors are disjoint
                }
            }
            u.at(i, j) = value;
        }
    }
    return u;
}

ScalarField add_bump(const ScalarField& u, const ConePoint& center,
                     double radius, double amplitude) {
    const PolarGrid& g = u.grid;
    if (!(radius > 0.0)) {
        throw config_error("add_bump: radius must be positive");
    }
    if (center.r + radius > g.R - g.dr() * (1.0 - 1e-12)) {
        throw config_error("add_bump: support reaches the outer ring");
    }
    ScalarField out = u;
    for (std::size_t n = 0; n < g.n_nodes(); ++n) {
        const ConePoint p =
            make_cone_point(g.r_of(g.ring_of(n)), g.theta_of(g.angle_of(n)),
                            g.cone);
        const double d = geodesic_distance(p, center, g.cone).distance;
        if (d < radius) {
            const double q = 1.0 - (d / radius) * (d / radius);
            out.values[n] += amplitude * q * q;
        }
    }
    return out;
}

ScalarField reflect_field(const ScalarField& u) {
    const PolarGrid& g = u.grid;
    ScalarField out(g);
    out.values[0] = u.values[0];
    for (int i = 1; i <= g.n_r; ++i) {
        for (int j = 0; j < g.n_theta; ++j) {
            out.at(i, j) = u.at(i, g.n_theta - j);
        }
    }
    return out;
}

MinimalityReport verify_local_minimality(const ScalarField& u,
                                         const ProblemSpec& spec,
                                         int n_perturbations,
                                         std::uint64_t seed) {
    const PolarGrid& g = u.grid;
    if (std::abs(g.cone.length - spec.cone.length) > 1e-12) {
        throw config_error(
            "verify_local_minimality: field and problem cones differ");
    }
    if (std::abs(spec.lambda_plus - 1.0) > 1e-12 ||
        std::abs(spec.lambda_minus) > 1e-12) {
        throw config_error(
            "verify_local_minimality: the vertex examples assume weights 1 and 0");
    }
    if (n_perturbations < 0) {
        throw config_error("verify_local_minimality: negative trial count");
    }

    MinimalityReport rep;
    rep.seed = seed;
    rep.n_perturbations = n_perturbations;
    rep.energy = discrete_energy(u, spec.lambda_plus, spec.lambda_minus);

    // Certificate assertions on u itself: no single-node move, no phase
    // replacement.
    rep.move_delta = certificate_min_delta(u, spec);
    const ScalarField replaced = replaced_phases(u, 1e-11);
    rep.replacement_delta =
        discrete_energy(replaced, spec.lambda_plus, spec.lambda_minus) -
        rep.energy;

    // Full descent driven by u's own boundary trace, with u as a start.
    std::vector<double> ring(g.n_theta);
    for (int j = 0; j < g.n_theta; ++j) {
        ring[j] = u.at(g.n_r, j);
    }
    const double dtheta = g.dtheta();
    const int n_theta = g.n_theta;
    const ProblemSpec own(
        g.cone, spec.lambda_plus, spec.lambda_minus,
        [ring, dtheta, n_theta](double theta) {
            const double s = theta / dtheta;
            const int j = static_cast<int>(std::floor(s));
            const double w = s - j;
            const int j0 = ((j % n_theta) + n_theta) % n_theta;
            const int j1 = (j0 + 1) % n_theta;
            return (1.0 - w) * ring[j0] + w * ring[j1];
        });
    MinimizerOptions opts;
    opts.n_starts = 2;
    opts.extra_starts = {u};
    rep.minimize_best = minimize_J(own, g, opts).energy;

    // Symmetry of the data decides whether reflected variants are valid
    // competitors (they must respect the boundary trace).
    double sup = 0.0;
    for (const double v : u.values) {
        sup = std::max(sup, std::abs(v));
    }
    double data_defect = 0.0;
    for (int j = 0; j < n_theta; ++j) {
        data_defect =
            std::max(data_defect, std::abs(ring[j] - ring[(n_theta - j) % n_theta]));
    }
    const bool symmetric_data = data_defect <= 1e-9 * std::max(1.0, sup);

    std::mt19937_64 eng(seed);
    const double R = g.R;
    const double dr = g.dr();
    for (int trial = 0; trial < n_perturbations; ++trial) {
        const double rc = R * (0.1 + 0.6 * uniform01(eng));
        const double rho_max = std::min(0.25 * R, R - 2.0 * dr - rc);
        const double rho = std::min(rho_max, 2.0 * dr + rho_max * uniform01(eng));
        const double tc = g.cone.length * uniform01(eng);
        const double amp =
            (2.0 * uniform01(eng) - 1.0) * 0.5 * std::max(sup, 1.0);
        const ScalarField v =
            add_bump(u, make_cone_point(rc, tc, g.cone), rho, amp);
        auto record = [&](const ScalarField& w) {
            const double gap =
                discrete_energy(w, spec.lambda_plus, spec.lambda_minus) -
                rep.energy;
            rep.min_perturbation_gap = std::min(rep.min_perturbation_gap, gap);
        };
        record(v);
        if (symmetric_data) {
            const ScalarField vr = reflect_field(v);
            record(vr);
            const LatticeResult lattice =
                lattice_combine(v, vr, spec.lambda_plus, spec.lambda_minus);
            record(lattice.min_field);
            record(lattice.max_field);
            rep.max_lattice_defect =
                std::max(rep.max_lattice_defect, lattice.defect);
        }
    }

    const double delta_tol = 1e-9 * (1.0 + std::abs(rep.energy));
    rep.certified = rep.move_delta >= -delta_tol &&
                    rep.replacement_delta >= -delta_tol &&
                    rep.minimize_best >= rep.energy - 1e-6 &&
                    (n_perturbations == 0 ||
                     rep.min_perturbation_gap >= -1e-6);
    return rep;
}

} // namespace conelab
