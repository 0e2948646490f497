#pragma once

#include "conelab/polygon.hpp"

#include <numbers>

namespace conelab {

/// The cone of length l: the flat quotient of the plane by the angular
/// identification theta ~ theta + l, with a single vertex at r = 0.
struct ConeParams {
    double length = 2.0 * std::numbers::pi;

    explicit ConeParams(double l);
    ConeParams() = default;

    /// 2*pi / length, the sharp radial growth exponent of harmonics.
    double holder_exponent() const { return 2.0 * std::numbers::pi / length; }
};

/// Point (r, theta) on the cone; theta reduced into [0, l), r = 0 pins
/// theta = 0 (the vertex is a single point).
struct ConePoint {
    double r = 0.0;
    double theta = 0.0;
};

ConePoint make_cone_point(double r, double theta, const ConeParams& cone);

/// Angular separation reduced to [0, l/2].
double angular_separation(const ConePoint& p, const ConePoint& q, const ConeParams& cone);

struct GeodesicResult {
    double distance = 0.0;
    bool through_vertex = false;
};

/// Geodesic dichotomy: separations below pi unroll to a straight chord;
/// separations of pi and above are realized by the two radii through the
/// vertex.  The tie at exactly pi (within 1e-12) reports through_vertex =
/// true: the vertex path is a witness minimizer there.
GeodesicResult geodesic_distance(const ConePoint& p, const ConePoint& q,
                                 const ConeParams& cone);

/// The planar wedge Omega = {x2 > -|cot(l/2)| |x1|} for l < 2*pi.  The
/// absolute value keeps the complement a single downward wedge on both sides
/// of l = pi; the raw cotangent changes sign there, which would contradict
/// the closing of the complement as l -> 2*pi.
struct WedgeRegion {
    enum class Location { inside, boundary, outside };

    explicit WedgeRegion(const ConeParams& cone);

    double length;
    double slope; // |cot(l/2)|

    /// Membership with the boundary band |x2 + slope|x1|| < 1e-12 flagged.
    Location classify(double x1, double x2, double tol = 1e-12) const;
    bool contains(double x1, double x2) const {
        return classify(x1, x2) == Location::inside;
    }
};

/// Isometric unrolling of the cut sector {theta in [0, l)} into the plane:
/// radius preserved, bisector theta = l/2 sent to the positive x2-axis, so
/// the seam rays theta in {0, l} land on the wedge boundary.  Rejects the
/// vertex (no tangent plane there).
Vec2 unroll_to_wedge(const ConePoint& p, const ConeParams& cone);

/// (R^2 \ Omega) intersected with the strip {-depth <= x2 <= 0}, as a
/// polygon with exact shoelace area.  For l = pi the complement degenerates
/// to the half-plane {x2 <= 0}; the strip is then truncated at |x1| <=
/// width/2 (default width = 2*depth) to keep the polygon bounded.
PolygonSet wedge_complement_strip(const ConeParams& cone, double depth,
                                  double width = -1.0);

} // namespace conelab
