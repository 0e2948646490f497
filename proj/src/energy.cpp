#include "conelab/energy.hpp"

#include "conelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conelab {

namespace {

/// Area of the node cell [r_i - dr/2, r_i + dr/2] (clamped to [0, R] and to
/// r_limit) times dtheta; the vertex owns [0, dr/2] of every angle.
double clipped_node_area(const PolarGrid& g, int ring, double r_limit) {
    const double dr = g.dr();
    double lo, hi, ang;
    if (ring == 0) {
        lo = 0.0;
        hi = 0.5 * dr;
        ang = g.cone.length;
    } else {
        lo = g.r_of(ring) - 0.5 * dr;
        hi = std::min(g.r_of(ring) + 0.5 * dr, g.R);
        ang = g.dtheta();
    }
    hi = std::min(hi, r_limit);
    if (hi <= lo) {
        return 0.0;
    }
    return 0.5 * ang * (hi * hi - lo * lo);
}

/// Half of the weighted-edge Dirichlet terms incident to the cell between
/// rings ci and ci + 1: every interior edge is shared by exactly two cells,
/// boundary-ring angular edges by one (which realises their 1/2 weight), so
/// the cell sum reproduces sum_e c_e (u_a - u_b)^2 over grid_edges.
double cell_dirichlet(const ScalarField& u, int ci, int cj) {
    const PolarGrid& g = u.grid;
    const double dr = g.dr();
    const double dt = g.dtheta();
    const double r_in = g.r_of(ci);
    const double r_out = g.r_of(ci + 1);
    const double r_mid = 0.5 * (r_in + r_out);
    const double u00 = u.values[g.id(ci, cj)];
    const double u01 = u.values[g.id(ci, cj + 1)];
    const double u10 = u.values[g.id(ci + 1, cj)];
    const double u11 = u.values[g.id(ci + 1, cj + 1)];
    double acc = 0.5 * (r_mid * dt / dr) *
                 ((u10 - u00) * (u10 - u00) + (u11 - u01) * (u11 - u01));
    if (ci >= 1) {
        acc += 0.5 * (dr / (r_in * dt)) * (u01 - u00) * (u01 - u00);
    }
    acc += 0.5 * (dr / (r_out * dt)) * (u11 - u10) * (u11 - u10);
    return acc;
}

} // namespace

EnergyBreakdown discrete_energy_parts(const ScalarField& u, double r_limit) {
    const PolarGrid& g = u.grid;
    EnergyBreakdown out;

    for (int i = 0; i < g.n_r; ++i) {
        const double r_in = g.r_of(i);
        if (r_in >= r_limit) {
            break;
        }
        const double r_out = g.r_of(i + 1);
        const double r_cut = std::min(r_out, r_limit);
        // Inside-area fraction of the annular cell row; 1 except for the
        // single row straddling r_limit.
        const double frac = (r_cut * r_cut - r_in * r_in) /
                            (r_out * r_out - r_in * r_in);
        for (int j = 0; j < g.n_theta; ++j) {
            out.dirichlet += frac * cell_dirichlet(u, i, j);
        }
    }

    const double v = u.values[0];
    const double va = clipped_node_area(g, 0, r_limit);
    if (v > 0.0) {
        out.area_pos += va;
    } else if (v < 0.0) {
        out.area_neg += va;
    }
    for (int i = 1; i <= g.n_r; ++i) {
        const double a = clipped_node_area(g, i, r_limit);
        if (a == 0.0) {
            continue;
        }
        for (int j = 0; j < g.n_theta; ++j) {
            const double w = u.values[g.id(i, j)];
            if (w > 0.0) {
                out.area_pos += a;
            } else if (w < 0.0) {
                out.area_neg += a;
            }
        }
    }
    return out;
}

double discrete_energy(const ScalarField& u, double lambda_plus, double lambda_minus,
                       double r_limit) {
    return discrete_energy_parts(u, r_limit).total(lambda_plus, lambda_minus);
}

double discrete_energy_masked(const ScalarField& u, double lambda_plus,
                              double lambda_minus,
                              const std::vector<std::uint8_t>& region) {
    const PolarGrid& g = u.grid;
    if (region.size() != g.n_nodes()) {
        throw config_error("discrete_energy_masked: mask size does not match grid");
    }
    double total = 0.0;
    for (int i = 0; i < g.n_r; ++i) {
        for (int j = 0; j < g.n_theta; ++j) {
            if (!region[g.id(i, j)] || !region[g.id(i, j + 1)] ||
                !region[g.id(i + 1, j)] || !region[g.id(i + 1, j + 1)]) {
                continue;
            }
            total += cell_dirichlet(u, i, j);
        }
    }
    for (std::size_t id = 0; id < g.n_nodes(); ++id) {
        if (!region[id]) {
            continue;
        }
        const double a = clipped_node_area(g, g.ring_of(id), g.R);
        const double w = u.values[id];
        if (w > 0.0) {
            total += lambda_plus * a;
        } else if (w < 0.0) {
            total += lambda_minus * a;
        }
    }
    return total;
}

LatticeResult lattice_combine(const ScalarField& u, const ScalarField& v,
                              double lambda_plus, double lambda_minus) {
    if (!u.grid.same_shape(v.grid)) {
        throw config_error("lattice_combine: fields on different grids");
    }
    LatticeResult out{ScalarField(u.grid), ScalarField(u.grid), 0.0};
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        out.min_field.values[k] = std::min(u.values[k], v.values[k]);
        out.max_field.values[k] = std::max(u.values[k], v.values[k]);
    }
    const double ju = discrete_energy(u, lambda_plus, lambda_minus);
    const double jv = discrete_energy(v, lambda_plus, lambda_minus);
    const double jmin = discrete_energy(out.min_field, lambda_plus, lambda_minus);
    const double jmax = discrete_energy(out.max_field, lambda_plus, lambda_minus);
    out.defect = std::abs(jmin + jmax - ju - jv);
    return out;
}

double mean_value_check(const ScalarField& u, const ConePoint& center, double r,
                        std::size_t samples) {
    const PolarGrid& g = u.grid;
    if (!(r > 0.0)) {
        throw config_error("mean_value_check: need r > 0");
    }
    double acc = 0.0;
    if (center.r == 0.0) {
        if (r > g.R) {
            throw config_error("mean_value_check: probe circle exits the grid");
        }
        const double dt = g.cone.length / static_cast<double>(samples);
        for (std::size_t s = 0; s < samples; ++s) {
            acc += u.interpolate(r, dt * (static_cast<double>(s) + 0.5));
        }
        return acc / static_cast<double>(samples) - u.vertex();
    }
    if (r >= center.r || center.r + r > g.R) {
        throw config_error("mean_value_check: probe disc must avoid the vertex and stay inside C_R");
    }
    const double dphi = 2.0 * std::numbers::pi / static_cast<double>(samples);
    for (std::size_t s = 0; s < samples; ++s) {
        const double phi = dphi * (static_cast<double>(s) + 0.5);
        // Local flat chart around the center: valid while the disc stays
        // clear of the vertex.
        const double x = center.r + r * std::cos(phi);
        const double y = r * std::sin(phi);
        const double rr = std::hypot(x, y);
        const double tt = center.theta + std::atan2(y, x);
        acc += u.interpolate(rr, tt);
    }
    return acc / static_cast<double>(samples) - u.interpolate(center.r, center.theta);
}

} // namespace conelab
