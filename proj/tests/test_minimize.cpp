#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conelab/errors.hpp"
#include "conelab/minimize.hpp"

#include <cmath>
#include <limits>
#include <numbers>

using namespace conelab;

namespace {
constexpr double pi = std::numbers::pi;

ProblemSpec two_phase_cos2() {
    ConeParams cone(pi);
    return ProblemSpec(cone, 1.0, 0.25, [l = cone.length](double theta) {
        return std::cos(2.0 * pi * theta / l);
    });
}
} // namespace

TEST_CASE("problem specs reject ambiguous weights and bad boundary data") {
    ConeParams cone(pi);
    CHECK_THROWS_AS(ProblemSpec(cone, 1.0, 1.0, [](double) { return 0.0; }),
                    config_error);
    ProblemSpec bad(cone, 1.0, 0.0, [](double theta) {
        return theta > 1.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    });
    PolarGrid g(cone, 8, 32);
    CHECK_THROWS_AS(bad.boundary_samples(g), config_error);
    ProblemSpec good = two_phase_cos2();
    CHECK(good.boundary_samples(g).size() == 32);
}

TEST_CASE("the two-phase benchmark minimizer is reproducible and certified") {
    ProblemSpec spec = two_phase_cos2();
    PolarGrid g(spec.cone, 24, 96);
    MinimizerResult r = minimize_J(spec, g);

    CHECK(std::abs(r.energy - 4.042146216050) < 1e-9);
    CHECK(r.vertex_distance == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(r.certified);
    CHECK(r.sweeps > 0);
    CHECK(r.sweeps <= 400);
    REQUIRE(r.winner >= 0);
    REQUIRE(static_cast<std::size_t>(r.winner) < r.starts.size());
    CHECK(r.starts[r.winner].converged);
    CHECK(r.starts[r.winner].certified);
    CHECK(!r.near_optimal.empty());
    CHECK(!r.free_boundary.empty());
    CHECK(!r.diagnostics.empty());

    // the certificate agrees: no single-node move improves the winner
    CHECK(certificate_min_delta(r.field, spec) > -1e-12);

    // phase masks match the field signs
    for (std::size_t k = 0; k < r.field.values.size(); ++k) {
        if (r.phase_pos[k]) {
            CHECK(r.field.values[k] > 0.0);
        }
        if (r.phase_neg[k]) {
            CHECK(r.field.values[k] < 0.0);
        }
        CHECK_FALSE(r.phase_pos[k] && r.phase_neg[k]);
    }
}

TEST_CASE("repeated runs are bitwise identical") {
    ProblemSpec spec = two_phase_cos2();
    PolarGrid g(spec.cone, 24, 96);
    MinimizerResult a = minimize_J(spec, g);
    MinimizerResult b = minimize_J(spec, g);
    CHECK(a.energy == b.energy);
    CHECK(a.vertex_distance == b.vertex_distance);
    CHECK(a.sweeps == b.sweeps);
    REQUIRE(a.field.values.size() == b.field.values.size());
    for (std::size_t k = 0; k < a.field.values.size(); ++k) {
        CHECK(a.field.values[k] == b.field.values[k]);
    }
}

TEST_CASE("seeding the winner back cannot change the optimum") {
    ProblemSpec spec = two_phase_cos2();
    PolarGrid g(spec.cone, 24, 96);
    MinimizerResult base = minimize_J(spec, g);
    MinimizerOptions opts;
    opts.extra_starts.push_back(base.field);
    MinimizerResult reseeded = minimize_J(spec, g, opts);
    CHECK(reseeded.energy == base.energy);
    CHECK(reseeded.starts.size() == base.starts.size() + 1);
}

TEST_CASE("a start prefix still produces a certified answer") {
    ProblemSpec spec = two_phase_cos2();
    PolarGrid g(spec.cone, 16, 64);
    MinimizerOptions opts;
    opts.n_starts = 1;
    MinimizerResult r = minimize_J(spec, g, opts);
    CHECK(r.starts.size() == 1);
    CHECK(r.certified);
    CHECK(std::isfinite(r.energy));
}
