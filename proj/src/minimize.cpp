#include "conelab/minimize.hpp"

#include "conelab/diagnostics.hpp"
#include "conelab/energy.hpp"
#include "conelab/errors.hpp"
#include "conelab/replace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace conelab {

namespace {

/// All energy terms the value at one node touches: the Dirichlet sums of
/// its incident cells plus the weighted area of its own node cell.  Uses
/// the same cell formulas as discrete_energy_parts so local differences
/// agree with global recomputation.
struct LocalEnergy {
    const PolarGrid& g;
    double lp;
    double lm;

    double cell(const ScalarField& u, int ci, int cj) const {
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

    double node_term(double value, int ring) const {
        if (value > 0.0) {
            return lp * g.node_area(ring);
        }
        if (value < 0.0) {
            return lm * g.node_area(ring);
        }
        return 0.0;
    }

    double around(const ScalarField& u, int i, int j) const {
        double acc = node_term(u.values[g.id(i, j)], i);
        if (i == 0) {
            for (int cj = 0; cj < g.n_theta; ++cj) {
                acc += cell(u, 0, cj);
            }
            return acc;
        }
        acc += cell(u, i - 1, j - 1) + cell(u, i - 1, j);
        if (i < g.n_r) {
            acc += cell(u, i, j - 1) + cell(u, i, j);
        }
        return acc;
    }
};

/// Conductance-weighted neighbour mean, the 5-point Euler-Lagrange value.
double weighted_mean(const ScalarField& u, int i, int j) {
    const PolarGrid& g = u.grid;
    const double dt = g.dtheta();
    if (i == 0) {
        double acc = 0.0;
        for (int jj = 0; jj < g.n_theta; ++jj) {
            acc += u.values[g.id(1, jj)];
        }
        return acc / g.n_theta;
    }
    const double c_down = (i - 0.5) * dt;
    const double c_up = (i + 0.5) * dt;
    const double c_ang = g.dr() / (g.r_of(i) * dt);
    double num = c_down * u.values[g.id(i - 1, j)];
    double den = c_down;
    if (i < g.n_r) {
        num += c_up * u.values[g.id(i + 1, j)];
        den += c_up;
    }
    num += c_ang * (u.values[g.id(i, j - 1)] + u.values[g.id(i, j + 1)]);
    den += 2.0 * c_ang;
    return num / den;
}

/// Applies the best strictly-improving candidate at each interior node in a
/// fixed order; returns the number of accepted moves.  When evaluate_only
/// is set nothing is applied and the most negative delta seen is reported
/// through min_delta.
int move_sweep(ScalarField& u, const LocalEnergy& le, double threshold,
               bool evaluate_only, double* min_delta) {
    const PolarGrid& g = u.grid;
    int moves = 0;
    double lowest = 0.0;
    for (int i = 0; i < g.n_r; ++i) {
        const int j_end = (i == 0) ? 1 : g.n_theta;
        for (int j = 0; j < j_end; ++j) {
            const std::size_t id = g.id(i, j);
            const double cur = u.values[id];
            const double m = weighted_mean(u, i, j);
            const double candidates[5] = {0.0, -cur, m, std::max(m, 0.0),
                                          std::min(m, 0.0)};
            const double base = le.around(u, i, j);
            double best_delta = 0.0;
            double best_value = cur;
            for (double cand : candidates) {
                if (cand == cur) {
                    continue;
                }
                u.values[id] = cand;
                const double delta = le.around(u, i, j) - base;
                if (delta < best_delta) {
                    best_delta = delta;
                    best_value = cand;
                }
            }
            u.values[id] = cur;
            lowest = std::min(lowest, best_delta);
            if (!evaluate_only && best_delta < -threshold) {
                u.values[id] = best_value;
                ++moves;
            }
        }
    }
    if (min_delta != nullptr) {
        *min_delta = lowest;
    }
    return moves;
}

struct Proposal {
    ScalarField field;
    double residual = 0.0;
    bool solved = false;
};

/// Harmonic replacement run separately on {u > 0} and {u < 0}; the
/// recombined field keeps the boundary row and the zero set fixed.
Proposal phase_replacement(const ScalarField& u, double tol) {
    const PolarGrid& g = u.grid;
    ScalarField up(g), un(g);
    std::vector<std::uint8_t> fp(g.n_nodes(), 0), fn(g.n_nodes(), 0);
    for (std::size_t id = 0; id < g.n_nodes(); ++id) {
        const double v = u.values[id];
        up.values[id] = v > 0.0 ? v : 0.0;
        un.values[id] = v < 0.0 ? -v : 0.0;
        if (g.ring_of(id) < g.n_r) {
            if (v > 0.0) {
                fp[id] = 1;
            } else if (v < 0.0) {
                fn[id] = 1;
            }
        }
    }
    const ReplacementResult rp = harmonic_replacement(up, fp, tol);
    const ReplacementResult rn = harmonic_replacement(un, fn, tol);
    Proposal out{ScalarField(g), std::max(rp.residual, rn.residual),
                 rp.converged && rn.converged};
    for (std::size_t id = 0; id < g.n_nodes(); ++id) {
        out.field.values[id] = std::max(rp.field.values[id], 0.0) -
                               std::max(rn.field.values[id], 0.0);
    }
    return out;
}

/// Max 5-point defect of u restricted to its own phase sets (the residual
/// the replacement solve would have to remove).
double phase_residual(const ScalarField& u) {
    const PolarGrid& g = u.grid;
    ScalarField up(g), un(g);
    for (std::size_t id = 0; id < g.n_nodes(); ++id) {
        const double v = u.values[id];
        up.values[id] = v > 0.0 ? v : 0.0;
        un.values[id] = v < 0.0 ? -v : 0.0;
    }
    double res = 0.0;
    for (int i = 0; i < g.n_r; ++i) {
        const int j_end = (i == 0) ? 1 : g.n_theta;
        for (int j = 0; j < j_end; ++j) {
            const double v = u.values[g.id(i, j)];
            if (v > 0.0) {
                res = std::max(res, std::abs(v - weighted_mean(up, i, j)));
            } else if (v < 0.0) {
                res = std::max(res, std::abs(-v - weighted_mean(un, i, j)));
            }
        }
    }
    return res;
}

struct RunOutcome {
    ScalarField field;
    double energy = 0.0;
    bool converged = false;
    int sweeps = 0;
    double residual = 0.0;
    std::vector<std::string> log;
};

RunOutcome run_descent(ScalarField u, const ProblemSpec& spec,
                       const MinimizerOptions& opts) {
    const LocalEnergy le{u.grid, spec.lambda_plus, spec.lambda_minus};
    RunOutcome out;
    double energy = discrete_energy(u, spec.lambda_plus, spec.lambda_minus);
    {
        std::ostringstream line;
        line << "start J=" << energy;
        out.log.push_back(line.str());
    }
    for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
        bool changed = false;
        const Proposal prop = phase_replacement(u, opts.replacement_tol);
        const double prop_energy =
            discrete_energy(prop.field, spec.lambda_plus, spec.lambda_minus);
        const bool accepted = prop_energy < energy - opts.accept_threshold;
        if (accepted) {
            u = prop.field;
            energy = prop_energy;
            changed = true;
        }
        const int moves =
            move_sweep(u, le, opts.accept_threshold, false, nullptr);
        if (moves > 0) {
            energy = discrete_energy(u, spec.lambda_plus, spec.lambda_minus);
            changed = true;
        }
        out.sweeps = sweep;
        std::ostringstream line;
        line << "sweep " << sweep << " J=" << energy
             << " replacement=" << (accepted ? "accepted" : "kept")
             << " moves=" << moves;
        out.log.push_back(line.str());
        if (!changed) {
            out.converged = true;
            break;
        }
    }
    out.residual = phase_residual(u);
    {
        std::ostringstream line;
        line << "final residual=" << out.residual
             << (out.converged ? "" : " (sweep limit reached)");
        out.log.push_back(line.str());
    }
    out.field = std::move(u);
    out.energy = energy;
    return out;
}

std::vector<std::pair<std::string, ScalarField>> make_starts(
    const PolarGrid& grid, const std::vector<double>& gsamp,
    const MinimizerOptions& opts) {
    ScalarField seed(grid);
    std::vector<std::uint8_t> interior(grid.n_nodes(), 0);
    for (std::size_t id = 0; id < grid.n_nodes(); ++id) {
        interior[id] = grid.ring_of(id) < grid.n_r ? 1 : 0;
    }
    for (int j = 0; j < grid.n_theta; ++j) {
        seed.values[grid.id(grid.n_r, j)] = gsamp[j];
    }
    const ScalarField harm =
        harmonic_replacement(seed, interior, std::min(opts.replacement_tol, 1e-10))
            .field;

    std::vector<std::pair<std::string, ScalarField>> starts;
    starts.emplace_back("harmonic", harm);

    ScalarField flip = harm;
    for (std::size_t id = 0; id < grid.n_nodes(); ++id) {
        if (grid.r_of(grid.ring_of(id)) < 0.3 * grid.R) {
            flip.values[id] = -flip.values[id];
        }
    }
    starts.emplace_back("vertex-flip", std::move(flip));

    ScalarField trunc = harm;
    for (std::size_t id = 0; id < grid.n_nodes(); ++id) {
        if (grid.r_of(grid.ring_of(id)) < 0.2 * grid.R) {
            trunc.values[id] = 0.0;
        }
    }
    starts.emplace_back("vertex-zero", std::move(trunc));

    ScalarField rays = harm;
    rays.values[0] = 0.0;
    for (int i = 1; i < grid.n_r; ++i) {
        for (int j = 0; j < grid.n_theta; ++j) {
            if (std::abs(gsamp[j]) <= 1e-12) {
                rays.values[grid.id(i, j)] = 0.0;
            }
        }
    }
    starts.emplace_back("ray-support", std::move(rays));

    starts.resize(opts.n_starts);
    int extra_index = 0;
    for (const ScalarField& f : opts.extra_starts) {
        if (!f.grid.same_shape(grid)) {
            throw config_error("minimize_J: extra start on a different grid");
        }
        ScalarField g = f;
        for (int j = 0; j < grid.n_theta; ++j) {
            g.values[grid.id(grid.n_r, j)] = gsamp[j];
        }
        starts.emplace_back("extra-" + std::to_string(extra_index++),
                            std::move(g));
    }
    return starts;
}

} // namespace

ProblemSpec::ProblemSpec(const ConeParams& c, double lp, double lm,
                         std::function<double(double)> g)
    : cone(c), lambda_plus(lp), lambda_minus(lm), boundary(std::move(g)) {
    if (!(lambda_plus >= 0.0) || !(lambda_minus >= 0.0)) {
        throw config_error("ProblemSpec: phase weights must be nonnegative");
    }
    if (lambda_plus == lambda_minus) {
        throw config_error("ProblemSpec: equal phase weights are not supported");
    }
    if (!boundary) {
        throw config_error("ProblemSpec: boundary data is required");
    }
}

std::vector<double> ProblemSpec::boundary_samples(const PolarGrid& grid) const {
    std::vector<double> out(grid.n_theta);
    for (int j = 0; j < grid.n_theta; ++j) {
        out[j] = boundary(grid.theta_of(j));
        if (!std::isfinite(out[j])) {
            throw config_error("ProblemSpec: boundary sample is not finite");
        }
    }
    return out;
}

MinimizerResult minimize_J(const ProblemSpec& spec, const PolarGrid& grid,
                           const MinimizerOptions& opts) {
    if (grid.cone.length != spec.cone.length) {
        throw config_error("minimize_J: grid cone does not match problem cone");
    }
    if (opts.n_starts < 2 || opts.n_starts > 4) {
        throw config_error("minimize_J: n_starts must be between 2 and 4");
    }
    const std::vector<double> gsamp = spec.boundary_samples(grid);
    const auto starts = make_starts(grid, gsamp, opts);

    MinimizerResult result;
    std::vector<RunOutcome> outcomes;
    outcomes.reserve(starts.size());
    for (const auto& [name, field] : starts) {
        RunOutcome run = run_descent(field, spec, opts);
        StartRecord rec;
        rec.name = name;
        rec.energy = run.energy;
        rec.converged = run.converged;
        rec.sweeps = run.sweeps;
        if (opts.certify) {
            const double delta = certificate_min_delta(run.field, spec);
            rec.certified = run.converged && delta >= -opts.accept_threshold;
        }
        result.starts.push_back(std::move(rec));
        outcomes.push_back(std::move(run));
    }

    int winner = 0;
    for (std::size_t k = 1; k < outcomes.size(); ++k) {
        if (outcomes[k].energy < outcomes[winner].energy) {
            winner = static_cast<int>(k);
        }
    }
    RunOutcome& best = outcomes[winner];
    result.winner = winner;
    result.field = std::move(best.field);
    result.energy =
        discrete_energy(result.field, spec.lambda_plus, spec.lambda_minus);
    result.certified = result.starts[winner].certified;
    result.sweeps = best.sweeps;
    result.diagnostics = std::move(best.log);
    for (std::size_t k = 0; k < result.starts.size(); ++k) {
        const StartRecord& rec = result.starts[k];
        std::ostringstream line;
        line << "start[" << k << "] " << rec.name << " J=" << rec.energy
             << " converged=" << (rec.converged ? "yes" : "no")
             << " certified=" << (rec.certified ? "yes" : "no");
        result.diagnostics.push_back(line.str());
        if (rec.certified &&
            rec.energy <= result.starts[winner].energy + 1e-6) {
            result.near_optimal.push_back(static_cast<int>(k));
        }
    }

    result.phase_pos.assign(grid.n_nodes(), 0);
    result.phase_neg.assign(grid.n_nodes(), 0);
    for (std::size_t id = 0; id < grid.n_nodes(); ++id) {
        if (result.field.values[id] > 0.0) {
            result.phase_pos[id] = 1;
        } else if (result.field.values[id] < 0.0) {
            result.phase_neg[id] = 1;
        }
    }
    FreeBoundary fb = extract_free_boundary(result.field);
    result.free_boundary = std::move(fb.polylines);
    result.vertex_distance = fb.vertex_distance;
    return result;
}

double certificate_min_delta(const ScalarField& u, const ProblemSpec& spec) {
    ScalarField work = u;
    const LocalEnergy le{work.grid, spec.lambda_plus, spec.lambda_minus};
    double min_delta = 0.0;
    move_sweep(work, le, 0.0, true, &min_delta);
    return min_delta;
}

} // namespace conelab
