#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mopp/errors.hpp"
#include "mopp/objectives.hpp"
#include "support/oracles.hpp"

using namespace mopp;

namespace {
constexpr double kSqrt2 = std::numbers::sqrt2;
}

TEST_CASE("step_distance is 1 orthogonal, sqrt(2) diagonal") {
    CHECK(step_distance({2, 2}, {2, 3}) == 1.0);
    CHECK(step_distance({2, 2}, {1, 2}) == 1.0);
    CHECK(step_distance({2, 2}, {3, 3}) == kSqrt2);
    CHECK(step_distance({2, 2}, {1, 1}) == kSqrt2);

    CHECK_THROWS_AS(step_distance({2, 2}, {2, 2}), InvalidStepError);
    CHECK_THROWS_AS(step_distance({2, 2}, {2, 4}), InvalidStepError);
    CHECK_THROWS_AS(step_distance({0, 0}, {2, 2}), InvalidStepError);
}

TEST_CASE("heuristic is the Euclidean cell-center distance") {
    CHECK(heuristic({0, 0}, {3, 4}) == 5.0);
    CHECK(heuristic({0, 0}, {99, 99}) == doctest::Approx(99.0 * kSqrt2));
    CHECK(heuristic({5, 5}, {5, 5}) == 0.0);
    CHECK(heuristic({2, 7}, {2, 9}) == 2.0);
    // Symmetry.
    CHECK(heuristic({1, 8}, {6, 3}) == heuristic({6, 3}, {1, 8}));
}

TEST_CASE("solar_step_cost is the normalized-heading dot product") {
    const Vec2 sun{1.0, 0.0};
    // Heading east (col +1) aligned with the sun.
    CHECK(solar_step_cost({0, 0}, {0, 1}, sun) == 1.0);
    // Heading north is orthogonal.
    CHECK(solar_step_cost({0, 0}, {1, 0}, sun) == 0.0);
    // Diagonal north-east projects cos(45 deg).
    CHECK(solar_step_cost({0, 0}, {1, 1}, sun) == doctest::Approx(1.0 / kSqrt2));
    // Heading west is anti-aligned: the dot product keeps its sign.
    CHECK(solar_step_cost({0, 0}, {0, -1}, sun) == -1.0);

    CHECK_THROWS_AS(solar_step_cost({3, 3}, {3, 3}, sun), InvalidStepError);

    SUBCASE("bounded by 1 for any heading and unit solar vector") {
        SeededRng rng(88);
        for (int i = 0; i < 1000; ++i) {
            const Vec2 s = Vec2{1.0, 0.0}.rotated(rng.uniform_real(0.0, 6.283185));
            const GridCoord from{rng.uniform_int(-5, 5), rng.uniform_int(-5, 5)};
            GridCoord to = from;
            while (to == from) {
                to = GridCoord{from.row + rng.uniform_int(-1, 1),
                               from.col + rng.uniform_int(-1, 1)};
            }
            CHECK(std::abs(solar_step_cost(from, to, s)) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("extend_objectives accumulates along a legal move") {
    Workspace ws = testing::open_workspace(5, 5);
    ws.elevation.at({1, 1}) = 0.5;
    ws.risk.center = {4, 0};
    ws.solar.initial = {1.0, 0.0};
    ws.solar.rotation_rate = 0.0;  // frozen sun pointing east

    const ObjectiveVector root{0.0, heuristic({0, 0}, ws.goal), 0.0, 0.0, 0.0};

    SUBCASE("cumulative mode sums every component") {
        const ObjectiveVector v =
            extend_objectives(root, {0, 0}, {1, 1}, ws, 0, ws.goal);
        CHECK(v.g == kSqrt2);
        CHECK(v.h == heuristic({1, 1}, ws.goal));
        CHECK(v.e == 0.5);
        CHECK(v.s == doctest::Approx(1.0 / kSqrt2));
        CHECK(v.r == doctest::Approx(risk_at(ws.risk, {1, 1})));

        // A second step stacks on top of the first.
        const ObjectiveVector w =
            extend_objectives(v, {1, 1}, {1, 2}, ws, 1, ws.goal);
        CHECK(w.g == doctest::Approx(kSqrt2 + 1.0));
        CHECK(w.e == 0.5);  // destination elevation is 0
        CHECK(w.s == doctest::Approx(1.0 / kSqrt2 + 1.0));
        CHECK(w.r == doctest::Approx(v.r + risk_at(ws.risk, {1, 2})));
    }

    SUBCASE("instantaneous mode keeps g cumulative, rest stepwise") {
        const ObjectiveVector v =
            extend_objectives(root, {0, 0}, {1, 1}, ws, 0, ws.goal,
                              AccumulationMode::Instantaneous);
        const ObjectiveVector w =
            extend_objectives(v, {1, 1}, {1, 2}, ws, 1, ws.goal,
                              AccumulationMode::Instantaneous);
        CHECK(w.g == doctest::Approx(kSqrt2 + 1.0));  // g still accumulates
        CHECK(w.e == 0.0);                            // only the new cell
        CHECK(w.s == doctest::Approx(1.0));
        CHECK(w.r == doctest::Approx(risk_at(ws.risk, {1, 2})));
    }

    SUBCASE("h is measured toward the stated target") {
        const ObjectiveVector v =
            extend_objectives(root, {0, 0}, {0, 1}, ws, 0, ws.start);
        CHECK(v.h == 1.0);  // back toward the start cell
    }

    SUBCASE("step_index drives the solar rotation") {
        ws.solar.rotation_rate = std::numbers::pi / 2.0;
        const ObjectiveVector v =
            extend_objectives(root, {0, 0}, {0, 1}, ws, 1, ws.goal);
        // At step 1 the sun points north; heading east is orthogonal.
        CHECK(v.s == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("illegal moves are rejected") {
        CHECK_THROWS_AS(extend_objectives(root, {0, 0}, {0, 2}, ws, 0, ws.goal),
                        InvalidStepError);
        CHECK_THROWS_AS(extend_objectives(root, {0, 0}, {-1, 0}, ws, 0, ws.goal),
                        InvalidStepError);
        ws.grid.set({1, 1}, true);
        CHECK_THROWS_AS(extend_objectives(root, {0, 0}, {1, 1}, ws, 0, ws.goal),
                        InvalidStepError);
    }
}

TEST_CASE("normalize_columns is per-column min-max") {
    std::vector<ObjectiveVector> vs;
    vs.push_back({2.0, 1.0, 0.0, -1.0, 5.0});
    vs.push_back({4.0, 1.0, 0.5, 0.0, 5.0});
    vs.push_back({6.0, 1.0, 1.0, 1.0, 5.0});

    const auto norm = normalize_columns(vs);
    REQUIRE(norm.size() == 3);
    // Column g: {2,4,6} -> {0, 0.5, 1}.
    CHECK(norm[0][0] == 0.0);
    CHECK(norm[1][0] == 0.5);
    CHECK(norm[2][0] == 1.0);
    // Constant columns (h, r) collapse to zero.
    for (size_t i = 0; i < 3; ++i) {
        CHECK(norm[i][1] == 0.0);
        CHECK(norm[i][4] == 0.0);
    }
    // Signed column s normalizes over its full range.
    CHECK(norm[0][3] == 0.0);
    CHECK(norm[1][3] == 0.5);
    CHECK(norm[2][3] == 1.0);

    SUBCASE("outputs always land in [0,1]") {
        SeededRng rng(31);
        std::vector<ObjectiveVector> random_vs;
        for (int i = 0; i < 200; ++i) {
            random_vs.push_back({rng.uniform_real(-10.0, 10.0),
                                 rng.uniform_real(0.0, 100.0),
                                 rng.uniform_real(0.0, 1.0),
                                 rng.uniform_real(-5.0, 5.0),
                                 rng.uniform_real(0.0, 0.01)});
        }
        for (const auto& row : normalize_columns(random_vs)) {
            for (double x : row) {
                CHECK(x >= 0.0);
                CHECK(x <= 1.0);
            }
        }
    }

    SUBCASE("empty input throws") {
        CHECK_THROWS_AS(normalize_columns({}), InvalidQueryError);
    }

    SUBCASE("single vector maps to all zeros") {
        const auto one = normalize_columns({ObjectiveVector{1, 2, 3, 4, 5}});
        CHECK(one.at(0) == std::array<double, 5>{0, 0, 0, 0, 0});
    }
}

TEST_CASE("composite_cost is the weighted sum with validated weights") {
    const std::array<double, 5> v{0.5, 0.25, 1.0, 0.0, 0.25};
    CHECK(composite_cost(v, kEqualWeights) == doctest::Approx(2.0));
    CHECK(composite_cost(v, Weights{2.0, 0.0, 0.5, 0.0, 0.0}) ==
          doctest::Approx(1.5));
    // Distance-only weighting reduces to f = g + h.
    CHECK(composite_cost(v, kDistanceOnlyWeights) == doctest::Approx(0.75));

    CHECK_THROWS_AS(composite_cost(v, Weights{0, 0, 0, 0, 0}), ConfigError);
    CHECK_THROWS_AS(composite_cost(v, Weights{-1, 1, 1, 1, 1}), ConfigError);
    CHECK_THROWS_AS(composite_cost(v, Weights{std::nan(""), 1, 1, 1, 1}),
                    ConfigError);
}

TEST_CASE("path_metrics recomputes the reportable columns") {
    Workspace ws = testing::open_workspace(12, 12);
    ws.risk.center = {11, 0};
    ws.solar.initial = {1.0, 0.0};
    ws.solar.rotation_rate = 0.0;

    SUBCASE("three-waypoint diagonal") {
        ws.elevation.at({1, 1}) = 0.5;
        ws.elevation.at({2, 2}) = 1.0;
        const std::vector<GridCoord> path{{0, 0}, {1, 1}, {2, 2}};
        const PathMetrics m = path_metrics(ws, path, 0.25, 42);

        CHECK(m.length == doctest::Approx(2.0 * kSqrt2));
        CHECK(m.mean_elevation == doctest::Approx(1.5 / 3.0));
        // Both steps head north-east against an eastward frozen sun.
        CHECK(m.solar_deviation == doctest::Approx(1.0 / kSqrt2));
        const double risk_sum = risk_at(ws.risk, {0, 0}) +
                                risk_at(ws.risk, {1, 1}) +
                                risk_at(ws.risk, {2, 2});
        CHECK(m.risk_proximity == doctest::Approx(risk_sum / 3.0));
        CHECK(m.compute_time == 0.25);
        CHECK(m.expansions == 42);
    }

    SUBCASE("risk mean uses the inverse squared distance") {
        ws.risk.center = {0, 10};
        const std::vector<GridCoord> path{{0, 0}, {0, 1}};
        // d^2 = 100 and 81 from the two waypoints to the risk center.
        const PathMetrics m = path_metrics(ws, path, 0.0, 0);
        CHECK(m.risk_proximity == doctest::Approx((0.01 + 1.0 / 81.0) / 2.0));
    }

    SUBCASE("solar uses the arrival step index") {
        ws.solar.rotation_rate = std::numbers::pi / 2.0;
        const std::vector<GridCoord> path{{0, 0}, {0, 1}, {0, 2}};
        // Step into waypoint 1: sun [0,1], heading east -> 0.
        // Step into waypoint 2: sun [-1,0], heading east -> -1.
        const PathMetrics m = path_metrics(ws, path, 0.0, 0);
        CHECK(m.solar_deviation == doctest::Approx(-0.5).epsilon(1e-9));
    }

    SUBCASE("invalid paths are rejected") {
        CHECK_THROWS_AS(path_metrics(ws, {}, 0.0, 0), InvalidStepError);
        CHECK_THROWS_AS(path_metrics(ws, {{3, 3}}, 0.0, 0), InvalidStepError);
        CHECK_THROWS_AS(path_metrics(ws, {{0, 0}, {0, 2}}, 0.0, 0),
                        InvalidStepError);
        CHECK_THROWS_AS(
            path_metrics(ws, {{0, 0}, {0, 1}, {0, 0}}, 0.0, 0),
            InvalidStepError);  // revisiting a waypoint
        ws.grid.set({1, 1}, true);
        CHECK_THROWS_AS(path_metrics(ws, {{0, 0}, {1, 1}}, 0.0, 0),
                        InvalidStepError);
    }
}
