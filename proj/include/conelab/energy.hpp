#pragma once

#include "conelab/polar_grid.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace conelab {

struct EnergyBreakdown {
    double dirichlet = 0.0;
    double area_pos = 0.0; // measure of {u > 0}
    double area_neg = 0.0; // measure of {u < 0}

    double total(double lambda_plus, double lambda_minus) const {
        return dirichlet + lambda_plus * area_pos + lambda_minus * area_neg;
    }
};

/// Discrete J on the cone ball of radius r_limit (default: whole grid).
/// The Dirichlet part is the weighted-edge form sum_e c_e (u_a - u_b)^2 of
/// grid_edges, accumulated per cell (each edge splits between its two
/// cells), so its Euler-Lagrange equations are exactly the 5-point stencil
/// that harmonic_replacement solves and the single-node optimum is the
/// weighted neighbour mean.  Phase areas by the exact annular node cells;
/// u = 0 counts as neither phase.  Cells straddling r_limit contribute
/// their inside fraction, so the r-dependence is smooth enough for the
/// monotone scans.
EnergyBreakdown discrete_energy_parts(
    const ScalarField& u,
    double r_limit = std::numeric_limits<double>::infinity());

double discrete_energy(const ScalarField& u, double lambda_plus, double lambda_minus,
                       double r_limit = std::numeric_limits<double>::infinity());

/// Restriction of the energy to a node mask: gradient cells whose four
/// corners all lie in the region, phase areas over region nodes.
double discrete_energy_masked(const ScalarField& u, double lambda_plus,
                              double lambda_minus, const std::vector<std::uint8_t>& region);

struct LatticeResult {
    ScalarField min_field;
    ScalarField max_field;
    double defect = 0.0; // |J(min) + J(max) - J(u) - J(v)|
};

/// Pointwise min/max pair with the energy-identity defect.  The identity is
/// exact on cells whose corners are consistently assigned; mixed cells leave
/// an O(h) remainder which the defect reports.
LatticeResult lattice_combine(const ScalarField& u, const ScalarField& v,
                              double lambda_plus, double lambda_minus);

/// (circle average of u at distance r from center) - u(center); subharmonic
/// fields must return >= -quadrature_error.  Interior centers use the local
/// flat chart, so the probe disc must avoid the vertex and stay inside C_R.
double mean_value_check(const ScalarField& u, const ConePoint& center, double r,
                        std::size_t samples = 4096);

} // namespace conelab
