#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace conelab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

struct BoundingBox {
    double x_min = 0.0, y_min = 0.0, x_max = 0.0, y_max = 0.0;
};

/// Closed half-plane {(x,y) : nx*x + ny*y <= c}; used as a clipping window.
struct HalfPlane {
    double nx = 0.0;
    double ny = 0.0;
    double c = 0.0;

    bool keeps(Vec2 p) const { return nx * p.x + ny * p.y <= c; }
};

struct Segment {
    Vec2 a;
    Vec2 b;
};

/// Union of simple CCW loops with pairwise disjoint interiors.
///
/// This is all the §-free machinery the competitor construction needs: the
/// sets it builds are unions of convex clips of simple polygons whose pieces
/// are separated by horizontal lines, so a loop list with disjoint interiors
/// is closed under every operation below.  Union is concatenation; clipping
/// is Sutherland-Hodgman against convex windows only.
class PolygonSet {
public:
    PolygonSet() = default;

    /// Adds a simple loop; reorients to CCW if the shoelace area is negative.
    /// Consecutive duplicate vertices (within 1e-14) are dropped.
    void add_loop(std::vector<Vec2> loop);

    static PolygonSet from_loop(std::vector<Vec2> loop);

    bool empty() const { return loops_.empty(); }
    const std::vector<std::vector<Vec2>>& loops() const { return loops_; }

    /// Exact shoelace area (sum over loops).
    double area() const;

    BoundingBox bounds() const;

    /// max |x| over vertices; 0 for the empty set.
    double horizontal_extent() const;

    /// Strict interior test by even-odd crossing count.  Points within
    /// `boundary_tol` of an edge are classified as outside (pinned side);
    /// interface-accurate treatment of near-boundary grid nodes is the
    /// cut-edge solver's job, not the membership test's.
    bool contains(Vec2 p, double boundary_tol = 1e-12) const;

    PolygonSet translated(double dx, double dy) const;
    PolygonSet scaled(double t) const; // about the origin, both axes

    /// Clips every loop to one closed half-plane (Sutherland-Hodgman).
    PolygonSet clipped(const HalfPlane& hp) const;

    /// Clips to the intersection of several half-planes (a convex window).
    PolygonSet clipped(const std::vector<HalfPlane>& window) const;

    /// All boundary edges, loop by loop; zero-length edges skipped.
    std::vector<Segment> edges() const;

    /// Maximal open intervals of {y = 0} covered by horizontal top edges.
    /// These are the segments where a set touching the line from below has
    /// its free trace.
    std::vector<std::array<double, 2>> top_edge_intervals(double tol = 1e-12) const;

    /// max |x(v) - (-x(v'))| over matched vertices after mirroring; 0 when
    /// the vertex lists are symmetric about {x = 0}.  Used by the symmetry
    /// invariant checks.
    double symmetry_defect_x() const;

private:
    std::vector<std::vector<Vec2>> loops_;
};

/// Shoelace area of one loop (signed; CCW positive).
double signed_area(const std::vector<Vec2>& loop);

/// Seeded Monte-Carlo area estimate by membership sampling over the bounding
/// box; independent oracle for the exact shoelace values.
double monte_carlo_area(const PolygonSet& set, std::size_t samples, std::uint64_t seed);

} // namespace conelab
