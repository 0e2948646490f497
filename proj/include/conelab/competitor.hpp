#pragma once

#include "conelab/halfplane.hpp"
#include "conelab/polygon.hpp"

#include <limits>
#include <string>
#include <vector>

namespace conelab {

/// Isosceles triangle with top edge [-c, c] on the line {x2 = 0} and apex
/// (0, -1); exact area c.
PolygonSet triangle_Ac(double c);

/// Piecewise-linear competitor profile: linear on each half of the
/// quadrilateral with corners (-c, 0), (0, h), (c, 0), (0, -1) and equal to
/// max(x2, 0) outside.  `gap` is its closed-form energy excess over the
/// half-plane profile, c + (h^2/(h+1))(c^2+1)/c - ch.
struct ExplicitProfile {
    double c = 0.0;
    double h = 0.0;
    double gap = 0.0;

    double operator()(Vec2 p) const;
};

/// h <= 0 selects the optimal height h = sqrt(c^2+1) - 1, for which the gap
/// reduces to 2(sqrt(c^2+1) - 1)/c.
ExplicitProfile explicit_w_gap(double c, double h = 0.0);

/// F(E) by the ball closure at radii R and 2R plus Richardson extrapolation
/// in 1/R^2.  `inner` keeps the radius-R solution (with the field when
/// requested), for energy comparisons on the same grid.
struct SolveFResult {
    double F = 0.0;   // extrapolated value
    double F_R = 0.0; // value at radius R
    double F_2R = 0.0;
    HalfPlaneSolution inner;
};

SolveFResult solve_F(const PolygonSet& E, double h, double R,
                     bool keep_field = false);

/// One shrink-translate-truncate move: scales E by t, drops it by 1 - t,
/// fills the vacated strip with the trapezoid spanning [-a, a] on top and
/// [-b, b] at depth -(1 - t), and truncates the dropped copy to |x1| <= b.
/// Requires a > b > 0, E symmetric about {x1 = 0} and inside R x [-1, 0].
PolygonSet inductive_step(const PolygonSet& E, double t, double a, double b);

struct CompetitorStep {
    PolygonSet set;        // E_k
    double F = 0.0;        // F(E_k)
    double t = 0.0;        // parameters producing E_{k+1} (0 on the last step)
    double a = 0.0;
    double b = 0.0;
    double bound = 0.0;    // 3 F_k / (3 + F_k)
    double envelope = 0.0; // 6 / (3 + 2k), from F_0 <= 2
    bool recurrence_ok = true;
};

struct CompetitorTrace {
    std::vector<CompetitorStep> steps;
    double h = 0.0;
    double recurrence_slack = 0.0;
    bool all_recurrence_ok = true;
};

struct IterationOptions {
    double h = 1.0 / 64;
    /// Truncation widths per step: b = clamp(b_factor * t * extent(E_k),
    /// b_min, b_cap), a = a_over_b * b.  The long shallow taper keeps the
    /// truncation cost of each step well below the 3(1-t)^2 budget behind
    /// the recurrence.  The default cap is infinite, so the truncation never
    /// cuts into the shrunk copy; a finite cap trades provable slack for
    /// bounded iterate widths (the deep profile near the axis, which carries
    /// the captured area, is untouched either way).
    double b_factor = 1.15;
    double b_min = 6.0;
    double b_cap = std::numeric_limits<double>::infinity();
    double a_over_b = 2.0;
    /// Absolute slack allowed in F_{k+1} <= 3 F_k / (3 + F_k).
    double recurrence_slack = 0.05;
};

/// Runs the shrink-translate-truncate iteration from E_0 = A_c with the
/// optimal factor t_k = 3 / (3 + F_k), recording every iterate with its
/// recurrence bound and the closed-form envelope.
CompetitorTrace run_iteration(double c, int k_max,
                              const IterationOptions& opts = {});

struct ImprovementReport {
    double target_area = 0.0;    // |A_c outside the wedge, above depth 3/5|
    double captured_area = 0.0;  // |E outside the wedge| for the last iterate
    double F = 0.0;              // F of the last iterate
    double gap = 0.0;            // F - captured_area; success iff < 0
    double energy_difference = 0.0; // direct J comparison inside the wedge
    bool containment = false;    // target region is inside the last iterate
    bool success = false;
    int iterations_run = 0;
    std::string message;
};

/// Tests whether the terminal iterate beats the half-plane profile on the
/// wedge of opening angle 2 pi - l around +e2 (the image of the cone of
/// length l < 2 pi): gap = F(E) - |E outside the wedge| must be negative,
/// corroborated by the energy difference J(u + x2) - J(x2+) over the wedge
/// restricted to the ball of radius R, computed on a grid of step h_field.
ImprovementReport strict_improvement_check(double l, double c,
                                           const CompetitorTrace& trace,
                                           double R, double h_field);

} // namespace conelab
