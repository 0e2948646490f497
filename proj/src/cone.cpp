#include "conelab/cone.hpp"

#include "conelab/errors.hpp"

#include <cmath>

namespace conelab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTiePi = 1e-12;
} // namespace

ConeParams::ConeParams(double l) : length(l) {
    if (!(l > 0.0) || !std::isfinite(l)) {
        throw config_error("ConeParams: length must be a positive real");
    }
}

ConePoint make_cone_point(double r, double theta, const ConeParams& cone) {
    if (r < 0.0 || !std::isfinite(r) || !std::isfinite(theta)) {
        throw config_error("make_cone_point: need finite r >= 0");
    }
    if (r == 0.0) {
        return {0.0, 0.0};
    }
    const double l = cone.length;
    double t = std::fmod(theta, l);
    if (t < 0.0) {
        t += l;
    }
    if (t == l) { // fmod round-up at the seam
        t = 0.0;
    }
    return {r, t};
}

double angular_separation(const ConePoint& p, const ConePoint& q, const ConeParams& cone) {
    const double l = cone.length;
    double d = std::abs(p.theta - q.theta);
    d = std::min(d, l - d);
    return d;
}

GeodesicResult geodesic_distance(const ConePoint& p, const ConePoint& q,
                                 const ConeParams& cone) {
    if (p.r == 0.0 || q.r == 0.0) {
        // Radial segment; counted as through the vertex only if it ends there.
        return {p.r + q.r, true};
    }
    const double delta = angular_separation(p, q, cone);
    if (delta < kPi - kTiePi) {
        const double d2 =
            p.r * p.r + q.r * q.r - 2.0 * p.r * q.r * std::cos(delta);
        return {std::sqrt(std::max(d2, 0.0)), false};
    }
    return {p.r + q.r, true};
}

WedgeRegion::WedgeRegion(const ConeParams& cone) : length(cone.length) {
    if (!(cone.length < 2.0 * kPi)) {
        throw config_error("WedgeRegion: requires cone length < 2*pi");
    }
    slope = std::abs(std::cos(0.5 * length) / std::sin(0.5 * length));
}

WedgeRegion::Location WedgeRegion::classify(double x1, double x2, double tol) const {
    const double f = x2 + slope * std::abs(x1);
    if (std::abs(f) < tol) {
        return Location::boundary;
    }
    return f > 0.0 ? Location::inside : Location::outside;
}

Vec2 unroll_to_wedge(const ConePoint& p, const ConeParams& cone) {
    if (p.r == 0.0) {
        throw config_error("unroll_to_wedge: the vertex has no planar image");
    }
    // Affine angle map phi(theta) = pi/2 + (l/2 - theta): the bisector goes
    // to the +x2 axis and the seam rays to the wedge boundary.
    const double phi = 0.5 * kPi + (0.5 * cone.length - p.theta);
    return {p.r * std::cos(phi), p.r * std::sin(phi)};
}

PolygonSet wedge_complement_strip(const ConeParams& cone, double depth, double width) {
    if (!(cone.length < 2.0 * kPi)) {
        throw config_error("wedge_complement_strip: Omega undefined for l >= 2*pi");
    }
    if (depth < 0.0) {
        throw config_error("wedge_complement_strip: depth must be >= 0");
    }
    if (depth == 0.0) {
        return {};
    }
    const double l = cone.length;
    if (std::abs(l - kPi) < 1e-14) {
        // Degenerate wedge: complement is the whole lower half-plane, kept
        // bounded by an explicit truncation width.
        const double half = 0.5 * (width > 0.0 ? width : 2.0 * depth);
        return PolygonSet::from_loop(
            {{-half, 0.0}, {half, 0.0}, {half, -depth}, {-half, -depth}});
    }
    // Half-width of the complement wedge at depth d is d*|tan(l/2)|.
    const double half = depth * std::abs(std::tan(0.5 * l));
    if (l < kPi) {
        // Triangle apex at the origin, base at x2 = -depth.
        return PolygonSet::from_loop({{0.0, 0.0}, {half, -depth}, {-half, -depth}});
    }
    // l in (pi, 2*pi): the wedge is wider than the strip is deep in the
    // proportion |tan(l/2)| > 0; same triangle formula applies and its area
    // depth^2 |tan(l/2)| -> 0 as l -> 2*pi.
    return PolygonSet::from_loop({{0.0, 0.0}, {half, -depth}, {-half, -depth}});
}

} // namespace conelab
