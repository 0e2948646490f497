#pragma once

#include "conelab/polar_grid.hpp"

#include <cstdint>
#include <vector>

namespace conelab {

/// One weighted edge of the polar graph; the discrete Dirichlet form is
/// sum_e c_e (u_a - u_b)^2 and its Euler-Lagrange equations are the 5-point
/// polar stencil (weighted neighbour mean at each node).
struct GridEdge {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    double c = 0.0;
};

/// Radial edges carry r_{i+1/2} dtheta / dr (the vertex connects to all of
/// ring 1), angular edges carry w dr / (r_i dtheta) with w = 1/2 on the
/// boundary ring.
std::vector<GridEdge> grid_edges(const PolarGrid& g);

struct ReplacementResult {
    ScalarField field;
    double residual = 0.0; // max weighted-mean defect over free nodes
    int iterations = 0;
    bool converged = false;
};

/// Solves the 5-point polar stencil on the free nodes with the complement of
/// the mask as Dirichlet data; a free vertex satisfies the first-ring mean
/// rule.  Free boundary-ring nodes are allowed (their stencil just lacks the
/// outward edge).  Deterministic (fixed elimination order CG).
ReplacementResult harmonic_replacement(const ScalarField& u,
                                       const std::vector<std::uint8_t>& free_nodes,
                                       double tol = 1e-11, int max_iter = 20000);

} // namespace conelab
