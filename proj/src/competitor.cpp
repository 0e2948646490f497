#include "conelab/competitor.hpp"

#include "conelab/cone.hpp"
#include "conelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace conelab {

namespace {

constexpr double kVertexTol = 1e-9;

/// Half-planes whose intersection is the closed complement of the wedge:
/// the convex downward sector {x2 <= -slope |x1|}.
std::vector<HalfPlane> sector_window(const WedgeRegion& wedge) {
    return {HalfPlane{wedge.slope, 1.0, 0.0}, HalfPlane{-wedge.slope, 1.0, 0.0}};
}

/// The loop index pair (i, i+1) of the unique top edge, which runs right to
/// left in a CCW loop.
std::size_t top_edge_start(const std::vector<Vec2>& loop, double y_top) {
    std::size_t found = loop.size();
    int count = 0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = loop[i];
        const Vec2& q = loop[(i + 1) % n];
        if (p.y >= y_top - kVertexTol && q.y >= y_top - kVertexTol &&
            p.x > q.x) {
            found = i;
            ++count;
        }
    }
    if (count != 1) {
        throw convergence_error(
            "inductive_step: truncated iterate lost its single top edge");
    }
    return found;
}

} // namespace

PolygonSet triangle_Ac(double c) {
    if (!(c > 0.0)) {
        throw config_error("triangle_Ac: width must be positive");
    }
    return PolygonSet::from_loop({{c, 0.0}, {-c, 0.0}, {0.0, -1.0}});
}

double ExplicitProfile::operator()(Vec2 p) const {
    const bool inside = p.x + c * p.y + c >= 0.0 && -p.x + c * p.y + c >= 0.0 &&
                        c * p.y - h * p.x <= c * h && c * p.y + h * p.x <= c * h;
    if (!inside) {
        return p.y > 0.0 ? p.y : 0.0;
    }
    const double slope = h / (c * (h + 1.0));
    return slope * (c + c * p.y - std::abs(p.x));
}

ExplicitProfile explicit_w_gap(double c, double h) {
    if (!(c > 0.0)) {
        throw config_error("explicit_w_gap: width must be positive");
    }
    if (h <= 0.0) {
        h = std::sqrt(c * c + 1.0) - 1.0;
    }
    ExplicitProfile w;
    w.c = c;
    w.h = h;
    w.gap = c + h * h / (h + 1.0) * (c * c + 1.0) / c - c * h;
    return w;
}

SolveFResult solve_F(const PolygonSet& E, double h, double R, bool keep_field) {
    if (!(R > 0.0)) {
        throw config_error("solve_F: truncation radius must be positive");
    }
    const BoundingBox bb = E.empty() ? BoundingBox{} : E.bounds();
    const double reach = std::max({E.horizontal_extent(), -bb.y_min, 0.0});
    if (R < 1.1 * reach) {
        throw config_error("solve_F: truncation radius too close to the set");
    }
    SolveFResult out;
    HalfPlaneOptions opts;
    opts.h = h;
    opts.closure = HalfPlaneClosure::disc;
    opts.disc_radius = R;
    opts.keep_field = keep_field;
    HalfPlaneSolution at_R = solve_halfplane(E, opts);
    opts.disc_radius = 2.0 * R;
    opts.keep_field = false;
    const HalfPlaneSolution at_2R = solve_halfplane(E, opts);
    out.F_R = at_R.F;
    out.F_2R = at_2R.F;
    out.F = (4.0 * at_2R.F - at_R.F) / 3.0; // leading truncation error ~ R^-2
    out.inner = std::move(at_R);
    return out;
}

PolygonSet inductive_step(const PolygonSet& E, double t, double a, double b) {
    if (!(t > 0.0) || t > 1.0) {
        throw config_error("inductive_step: shrink factor must lie in (0, 1]");
    }
    if (!(a > b) || !(b > 0.0)) {
        throw config_error("inductive_step: need widths a > b > 0");
    }
    if (E.empty()) {
        throw config_error("inductive_step: empty set");
    }
    const BoundingBox bb = E.bounds();
    if (bb.y_min < -1.0 - kVertexTol || bb.y_max > kVertexTol) {
        throw config_error("inductive_step: set must lie in R x [-1, 0]");
    }
    if (E.symmetry_defect_x() > kVertexTol) {
        throw config_error("inductive_step: set must be symmetric about {x1=0}");
    }

    const double s = 1.0 - t;
    const PolygonSet dropped = E.scaled(t).translated(0.0, -s);
    const PolygonSet clipped = dropped.clipped(
        {HalfPlane{1.0, 0.0, b}, HalfPlane{-1.0, 0.0, b}});
    if (s <= 1e-15) {
        return clipped;
    }

    // Stitch the trapezoid roof onto the loop that reaches the seam level
    // -s, dropping that loop's top edge: the seam is interior, not boundary.
    PolygonSet out;
    int roofed = 0;
    for (const auto& loop : clipped.loops()) {
        double y_max = loop.front().y;
        for (const Vec2& v : loop) {
            y_max = std::max(y_max, v.y);
        }
        if (y_max < -s - kVertexTol) {
            out.add_loop(loop);
            continue;
        }
        ++roofed;
        const std::size_t n = loop.size();
        const std::size_t top = top_edge_start(loop, -s);
        std::vector<Vec2> merged;
        merged.reserve(n + 4);
        merged.push_back({a, 0.0});
        merged.push_back({-a, 0.0});
        merged.push_back({-b, -s});
        for (std::size_t k = 1; k <= n; ++k) {
            merged.push_back(loop[(top + k) % n]);
        }
        merged.push_back({b, -s});
        out.add_loop(std::move(merged));
    }
    if (roofed != 1) {
        throw convergence_error(
            "inductive_step: expected exactly one component at the seam level");
    }
    return out;
}

CompetitorTrace run_iteration(double c, int k_max, const IterationOptions& opts) {
    if (!(c > 0.0)) {
        throw config_error("run_iteration: width must be positive");
    }
    if (k_max < 0) {
        throw config_error("run_iteration: step count must be nonnegative");
    }
    if (opts.b_cap < opts.b_min) {
        throw config_error("run_iteration: width cap below the minimum width");
    }
    HalfPlaneOptions hp;
    hp.h = opts.h;
    hp.closure = HalfPlaneClosure::dtn;

    CompetitorTrace trace;
    trace.h = opts.h;
    trace.recurrence_slack = opts.recurrence_slack;

    PolygonSet E = triangle_Ac(c);
    for (int k = 0; k <= k_max; ++k) {
        CompetitorStep step;
        step.F = solve_halfplane(E, hp).F;
        step.bound = 3.0 * step.F / (3.0 + step.F);
        step.envelope = 6.0 / (3.0 + 2.0 * k);
        step.recurrence_ok =
            step.F <= step.envelope + k * opts.recurrence_slack;
        if (k > 0) {
            const CompetitorStep& prev = trace.steps.back();
            if (step.F > prev.bound + opts.recurrence_slack) {
                step.recurrence_ok = false;
            }
        }
        trace.all_recurrence_ok = trace.all_recurrence_ok && step.recurrence_ok;
        step.set = E;
        if (k < k_max) {
            step.t = 3.0 / (3.0 + step.F);
            step.b = std::clamp(opts.b_factor * step.t * E.horizontal_extent(),
                                opts.b_min, opts.b_cap);
            step.a = opts.a_over_b * step.b;
            E = inductive_step(E, step.t, step.a, step.b);
        }
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

ImprovementReport strict_improvement_check(double l, double c,
                                           const CompetitorTrace& trace,
                                           double R, double h_field) {
    if (!(l > 0.0) || l >= 2.0 * std::numbers::pi - 1e-12) {
        throw config_error(
            "strict_improvement_check: cone length must lie in (0, 2 pi)");
    }
    if (!(c > 0.0)) {
        throw config_error("strict_improvement_check: width must be positive");
    }
    if (trace.steps.empty()) {
        throw config_error("strict_improvement_check: empty trace");
    }
    const PolygonSet& E = trace.steps.back().set;

    ImprovementReport rep;
    rep.F = trace.steps.back().F;
    rep.iterations_run = static_cast<int>(trace.steps.size()) - 1;

    // Target region: the part of A_c outside the wedge, above depth 3/5.
    const WedgeRegion wedge{ConeParams(l)};
    const std::vector<HalfPlane> sector = sector_window(wedge);
    std::vector<HalfPlane> target_window = sector;
    target_window.push_back(HalfPlane{0.0, -1.0, 3.0 / 5.0});
    const PolygonSet D = triangle_Ac(c).clipped(target_window);
    rep.target_area = D.area();

    rep.captured_area = E.clipped(sector).area();

    std::vector<HalfPlane> containment_window = target_window;
    containment_window.push_back(HalfPlane{1.0, -c, c});
    containment_window.push_back(HalfPlane{-1.0, -c, c});
    containment_window.push_back(HalfPlane{0.0, 1.0, 0.0});
    const double overlap = E.clipped(containment_window).area();
    rep.containment =
        std::abs(overlap - rep.target_area) <= 1e-9 * std::max(1.0, rep.target_area);

    rep.gap = rep.F - rep.captured_area;

    // Direct corroboration: J(u + x2) - J(x2+) over the wedge inside B_R,
    // with both profiles discretized on the same grid.
    HalfPlaneOptions hp;
    hp.h = h_field;
    hp.closure = HalfPlaneClosure::disc;
    hp.disc_radius = R;
    hp.keep_field = true;
    const HalfPlaneSolution sol = solve_halfplane(E, hp);
    const CartesianGrid& g = sol.grid;
    const double h = h_field;
    double diff = 0.0;
    for (int iy = 0; iy + 1 < g.ny; ++iy) {
        const double yc = g.y_of(iy) + 0.5 * h;
        for (int ix = 0; ix + 1 < g.nx; ++ix) {
            const double xc = g.x_of(ix) + 0.5 * h;
            if (xc * xc + yc * yc >= R * R) {
                continue;
            }
            if (yc <= -wedge.slope * std::abs(xc)) {
                continue;
            }
            const double y0 = g.y_of(iy);
            const double y1 = g.y_of(iy + 1);
            const double e00 = sol.field[g.id(ix, iy)] + y0;
            const double e10 = sol.field[g.id(ix + 1, iy)] + y0;
            const double e01 = sol.field[g.id(ix, iy + 1)] + y1;
            const double e11 = sol.field[g.id(ix + 1, iy + 1)] + y1;
            const double v0 = std::max(y0, 0.0);
            const double v1 = std::max(y1, 0.0);
            const double ex = 0.5 * ((e10 - e00) + (e11 - e01)) / h;
            const double ey = 0.5 * ((e01 - e00) + (e11 - e10)) / h;
            const double vy = (v1 - v0) / h;
            diff += (ex * ex + ey * ey - vy * vy) * h * h;
            const bool e_pos = e00 + e10 + e01 + e11 > 0.0;
            const bool v_pos = v0 + v1 > 0.0;
            if (e_pos != v_pos) {
                diff += (e_pos ? 1.0 : -1.0) * h * h;
            }
        }
    }
    rep.energy_difference = diff;

    rep.success = rep.containment && rep.gap < 0.0 && rep.energy_difference < 0.0;
    std::ostringstream msg;
    if (!rep.containment) {
        msg << "target region escapes the final iterate; increase c";
    } else if (rep.gap >= 0.0) {
        msg << "insufficient iterations: F exceeds the captured area by "
            << rep.gap;
    } else if (rep.energy_difference >= 0.0) {
        msg << "direct energy comparison disagrees with the gap";
    } else {
        msg << "strict improvement certified";
    }
    rep.message = msg.str();
    return rep;
}

} // namespace conelab
