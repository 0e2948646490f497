#pragma once

#include "conelab/polar_grid.hpp"
#include "conelab/polygon.hpp"

#include <vector>

namespace conelab {

/// Truncation of the exterior harmonic problem for u_E: `disc` pins the
/// data on everything outside E and the open upper half-ball B_R+ (the
/// literal truncated problem, to be Richardson-extrapolated in R); `dtn`
/// closes the slab below the line with the exact lattice Dirichlet-to-
/// Neumann operator of the discrete upper half-plane, so no radius enters.
enum class HalfPlaneClosure { disc, dtn };

struct HalfPlaneOptions {
    double h = 1.0 / 64.0;
    HalfPlaneClosure closure = HalfPlaneClosure::dtn;
    double disc_radius = 0.0; // required for the disc closure
    double cg_tol = 1e-10;
    int cg_max_iter = 60000;
    bool keep_field = false;  // store u on the whole grid (pinned included)
};

struct HalfPlaneSolution {
    double F = 0.0;             // |E| - integral of u over the line
    double area = 0.0;          // exact polygon area of E
    double line_integral = 0.0; // trapezoid integral of u(x, 0)
    int cg_iterations = 0;
    bool converged = false;
    std::size_t free_nodes = 0;

    CartesianGrid grid;              // bottom-up rows; line row at line_iy
    int line_iy = 0;
    std::vector<double> line_values; // u on the line row, size grid.nx
    std::vector<double> field;       // full grid values iff keep_field
};

/// Solves the discrete problem: u harmonic on the nodes of E, of the open
/// top-edge trace on the line, and (disc closure) of B_R+; u = x2^- on
/// everything else.  Boundary-crossing lattice edges are shortened to the
/// cut point, carry conductance 1/t (t clipped to [1e-3, 1]) and Dirichlet
/// data x2^- at the cut, which keeps the system a symmetric M-matrix.
/// Returns F(E) = |E| - integral of the line trace.
HalfPlaneSolution solve_halfplane(const PolygonSet& E,
                                  const HalfPlaneOptions& opts);

} // namespace conelab
