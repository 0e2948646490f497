#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conelab/cone.hpp"
#include "conelab/errors.hpp"

#include <cmath>
#include <numbers>

using namespace conelab;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("cone points reduce theta into [0, l) and pin the vertex") {
    ConeParams cone(2.0 * pi);
    CHECK(make_cone_point(1.0, -0.1, cone).theta == doctest::Approx(2.0 * pi - 0.1));
    CHECK(make_cone_point(1.0, 2.0 * pi + 0.3, cone).theta == doctest::Approx(0.3));
    CHECK(make_cone_point(0.0, 1.7, cone).theta == 0.0);
    CHECK(ConeParams(pi).holder_exponent() == doctest::Approx(2.0));
}

TEST_CASE("angular separation wraps to the short side") {
    ConeParams cone(2.0 * pi);
    ConePoint p = make_cone_point(1.0, 0.5, cone);
    ConePoint q = make_cone_point(2.0, 6.0, cone);
    CHECK(angular_separation(p, q, cone) == doctest::Approx(2.0 * pi - 5.5));
    CHECK(angular_separation(q, p, cone) == doctest::Approx(2.0 * pi - 5.5));
    CHECK(angular_separation(p, p, cone) == doctest::Approx(0.0));
}

TEST_CASE("geodesics below separation pi are chords") {
    ConeParams cone(2.0 * pi);
    // perpendicular unit radii: chord sqrt(2)
    GeodesicResult r = geodesic_distance(make_cone_point(1.0, 0.0, cone),
                                         make_cone_point(1.0, pi / 2, cone), cone);
    CHECK(r.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK_FALSE(r.through_vertex);
    // equilateral configuration: separation pi/3 at unit radii gives side 1
    GeodesicResult e = geodesic_distance(make_cone_point(1.0, 0.2, cone),
                                         make_cone_point(1.0, 0.2 + pi / 3, cone), cone);
    CHECK(e.distance == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(e.through_vertex);
}

TEST_CASE("geodesics at separation pi and beyond pass through the vertex") {
    ConeParams wide(4.0 * pi);
    GeodesicResult v = geodesic_distance(make_cone_point(1.0, 0.3, wide),
                                         make_cone_point(2.0, 0.3 + 2.0 * pi, wide), wide);
    CHECK(v.distance == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(v.through_vertex);

    // at exactly pi the chord degenerates to the sum of the radii and the
    // vertex path is an equal-length witness
    ConeParams cone(2.0 * pi);
    GeodesicResult tie = geodesic_distance(make_cone_point(1.0, 0.0, cone),
                                           make_cone_point(0.5, pi, cone), cone);
    CHECK(tie.distance == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(tie.through_vertex);

    // just below pi the chord beats the vertex path strictly
    GeodesicResult below = geodesic_distance(
        make_cone_point(1.0, 0.0, cone), make_cone_point(0.5, pi - 1e-3, cone), cone);
    CHECK(below.distance < 1.5);
    CHECK_FALSE(below.through_vertex);
}

TEST_CASE("geodesic distance is symmetric and monotone in the separation") {
    ConeParams cone(3.0 * pi);
    ConePoint p = make_cone_point(0.8, 0.2, cone);
    ConePoint q = make_cone_point(1.3, 1.1, cone);
    GeodesicResult pq = geodesic_distance(p, q, cone);
    GeodesicResult qp = geodesic_distance(q, p, cone);
    CHECK(pq.distance == doctest::Approx(qp.distance).epsilon(1e-14));

    double prev = 0.0;
    for (double sep = 0.1; sep < 1.5 * pi; sep += 0.1) {
        ConePoint b = make_cone_point(1.3, 0.2 + sep, cone);
        double d = geodesic_distance(p, b, cone).distance;
        CHECK(d >= prev - 1e-12);
        prev = d;
    }
    // the vertex path caps the distance at the sum of the radii
    CHECK(prev == doctest::Approx(0.8 + 1.3).epsilon(1e-12));
}

TEST_CASE("wedge region slope and classification") {
    WedgeRegion half(ConeParams(pi)); // cot(pi/2) = 0: upper half plane
    CHECK(half.slope == doctest::Approx(0.0));
    CHECK(half.contains(0.3, 1e-3));
    CHECK_FALSE(half.contains(0.3, -1e-3));
    CHECK(half.classify(0.3, 0.0) == WedgeRegion::Location::boundary);

    WedgeRegion quarter(ConeParams(pi / 2)); // |cot(pi/4)| = 1
    CHECK(quarter.slope == doctest::Approx(1.0));
    CHECK(quarter.contains(1.0, -0.5));
    CHECK_FALSE(quarter.contains(1.0, -1.5));
    CHECK(quarter.classify(1.0, -1.0) == WedgeRegion::Location::boundary);

    // the absolute value keeps the slope equal on both sides of l = pi
    WedgeRegion threequarter(ConeParams(1.5 * pi)); // |cot(3 pi / 4)| = 1
    CHECK(threequarter.slope == doctest::Approx(1.0));
}

TEST_CASE("unrolling preserves radius and sends the bisector upward") {
    for (double l : {pi / 2, pi, 1.5 * pi}) {
        ConeParams cone(l);
        Vec2 bis = unroll_to_wedge(make_cone_point(2.0, l / 2, cone), cone);
        CHECK(bis.x == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(bis.y == doctest::Approx(2.0).epsilon(1e-14));
        Vec2 p = unroll_to_wedge(make_cone_point(0.7, 0.3 * l, cone), cone);
        CHECK(std::hypot(p.x, p.y) == doctest::Approx(0.7).epsilon(1e-14));
    }
    ConeParams cone(1.5 * pi);
    // seam rays land on the wedge boundary for l >= pi
    WedgeRegion w(cone);
    Vec2 seam = unroll_to_wedge(make_cone_point(1.0, 1e-15, cone), cone);
    CHECK(w.classify(seam.x, seam.y, 1e-9) == WedgeRegion::Location::boundary);
    CHECK_THROWS_AS(unroll_to_wedge(make_cone_point(0.0, 0.0, cone), cone),
                    config_error);
}

TEST_CASE("wedge complement strip areas") {
    // l = pi: complement is the lower half plane, strip truncated at width
    // 2 * depth, so the area is 2 * depth^2
    PolygonSet flat = wedge_complement_strip(ConeParams(pi), 0.5);
    CHECK(flat.area() == doctest::Approx(0.5).epsilon(1e-12));
    // slope-1 complements: area of {|x1| <= s} integrated over s in [0, d]
    PolygonSet quarter = wedge_complement_strip(ConeParams(pi / 2), 0.5);
    CHECK(quarter.area() == doctest::Approx(0.25).epsilon(1e-12));
    PolygonSet threequarter = wedge_complement_strip(ConeParams(1.5 * pi), 0.5);
    CHECK(threequarter.area() == doctest::Approx(quarter.area()).epsilon(1e-12));
    CHECK(flat.symmetry_defect_x() == doctest::Approx(0.0));
}
