#pragma once

#include "conelab/cone.hpp"
#include "conelab/polar_grid.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace conelab {

/// Two-phase problem data: phase weights and Dirichlet values g on the outer
/// circle r = R.  Equal weights make the phase label of the zero level
/// ambiguous and are rejected.
struct ProblemSpec {
    ConeParams cone;
    double lambda_plus = 1.0;
    double lambda_minus = 0.0;
    std::function<double(double)> boundary;

    ProblemSpec(const ConeParams& c, double lp, double lm,
                std::function<double(double)> g);

    /// g sampled at the outer-ring node angles; throws if any value is not
    /// finite.
    std::vector<double> boundary_samples(const PolarGrid& grid) const;
};

struct MinimizerOptions {
    /// Deterministic start list: harmonic extension, vertex sign-flip,
    /// vertex truncation, boundary-ray support.  n_starts selects a prefix.
    int n_starts = 4;
    int max_sweeps = 400;
    /// 5-point residual required of the phase-wise harmonic replacement.
    double replacement_tol = 1e-9;
    /// A move must lower J by more than this to be accepted (strict descent
    /// guarantees termination).
    double accept_threshold = 1e-14;
    bool certify = true;
    /// Additional start fields, e.g. a candidate minimizer under scrutiny.
    std::vector<ScalarField> extra_starts;
};

struct StartRecord {
    std::string name;
    double energy = 0.0;
    bool converged = false;
    bool certified = false;
    int sweeps = 0;
};

struct MinimizerResult {
    ScalarField field;
    double energy = 0.0;
    std::vector<std::uint8_t> phase_pos;
    std::vector<std::uint8_t> phase_neg;
    std::vector<std::vector<ConePoint>> free_boundary;
    double vertex_distance = std::numeric_limits<double>::infinity();
    bool certified = false;
    int sweeps = 0;
    int winner = 0;                       // index into starts
    std::vector<StartRecord> starts;
    std::vector<int> near_optimal;        // certified starts within 1e-6 of best J
    std::vector<std::string> diagnostics; // per-sweep log of the winning run
};

/// Alternating descent on the discrete functional: phase-wise harmonic
/// replacement proposals and single-node value moves, both accepted only on
/// strict energy decrease, repeated from each start; returns the lowest-J
/// run.  certified means the exhaustive single-node check found no
/// improving move at termination.
MinimizerResult minimize_J(const ProblemSpec& spec, const PolarGrid& grid,
                           const MinimizerOptions& opts = {});

/// Most negative single-node move found (candidates: 0, sign flip, weighted
/// neighbour mean and its truncations).  Nonnegative return = local
/// minimality certificate for u under spec.
double certificate_min_delta(const ScalarField& u, const ProblemSpec& spec);

} // namespace conelab
