#pragma once

#include "conelab/minimize.hpp"
#include "conelab/polar_grid.hpp"

#include <cstdint>
#include <limits>

namespace conelab {

/// Transplant of the half-plane profile through the isometry that maps one
/// full plane's worth of angle onto the sector |theta - l/2| < pi: the field
/// r cos(theta - l/2)^+ there, zero on the rest of the cone.  Needs l >= 2 pi;
/// the free boundary consists of two rays meeting at the vertex.
ScalarField slit_transplant(const PolarGrid& grid);

/// k transplanted half-plane profiles centered at theta = (2m+1) l / (2k),
/// m = 0..k-1: positive on k disjoint sectors of width pi separated by k
/// zero sectors, every component touching the vertex.  k = 1 reproduces
/// slit_transplant exactly.  `min_length` guards the geometric threshold and
/// defaults to 2 pi k (disjoint width-2 pi transplant sectors); pass a
/// stricter value to probe larger-length constructions.
ScalarField multi_phase_paste(const PolarGrid& grid, int k = 2,
                              double min_length = -1.0);

/// u plus amplitude * (1 - (d/radius)^2)^2 on the geodesic ball around
/// `center`; the support must not reach the outer ring (the boundary data
/// stays fixed).
ScalarField add_bump(const ScalarField& u, const ConePoint& center,
                     double radius, double amplitude);

/// Reflection across the bisector theta = l/2: out(r, theta) = u(r, l - theta).
ScalarField reflect_field(const ScalarField& u);

struct MinimalityReport {
    double energy = 0.0;            // J(u) on the grid
    double move_delta = 0.0;        // best single-node improvement from u
    double replacement_delta = 0.0; // J(phase replacement) - J(u)
    double minimize_best = 0.0;     // best energy of the descent seeded with u
    double min_perturbation_gap = std::numeric_limits<double>::infinity();
    double max_lattice_defect = 0.0;
    std::uint64_t seed = 0;
    int n_perturbations = 0;
    bool certified = false;
};

/// Local-minimality certificate for a vertex-touching example: (i) the
/// descent machinery, seeded with u and driven by u's own boundary trace,
/// must not improve on J(u); (ii) seeded random bumps, their reflections,
/// and the lattice min/max recombinations must not drop J beyond tolerance.
/// Requires lambda_plus = 1, lambda_minus = 0 (the regime of the examples).
MinimalityReport verify_local_minimality(const ScalarField& u,
                                         const ProblemSpec& spec,
                                         int n_perturbations,
                                         std::uint64_t seed);

} // namespace conelab
