#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mopp/bench.hpp"
#include "mopp/errors.hpp"
#include "mopp/planner.hpp"
#include "support/oracles.hpp"

using namespace mopp;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

PlannerConfig distance_only(Algorithm algorithm) {
    PlannerConfig config;
    config.algorithm = algorithm;
    config.weights = kDistanceOnlyWeights;
    if (is_pareto(algorithm)) {
        config.selector = PrioritySelector::custom(kDistanceOnlyWeights);
    }
    return config;
}

double path_length(const std::vector<GridCoord>& path) {
    double length = 0.0;
    for (size_t i = 1; i < path.size(); ++i) {
        length += step_distance(path[i - 1], path[i]);
    }
    return length;
}

SearchNode node(GridCoord coord, ObjectiveVector objectives) {
    SearchNode n;
    n.coord = coord;
    n.objectives = objectives;
    return n;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
    for (Algorithm a : {Algorithm::Astar, Algorithm::Dstar, Algorithm::DstarPo,
                        Algorithm::AstarPo}) {
        CHECK(algorithm_from_string(to_string(a)) == a);
    }
    CHECK(algorithm_from_string("dstar_po") == Algorithm::DstarPo);
    CHECK_THROWS_AS(algorithm_from_string("bfs"), ConfigError);

    CHECK_FALSE(is_pareto(Algorithm::Astar));
    CHECK(is_pareto(Algorithm::AstarPo));
    CHECK(is_pareto(Algorithm::DstarPo));
    CHECK(is_goal_rooted(Algorithm::Dstar));
    CHECK(is_goal_rooted(Algorithm::DstarPo));
    CHECK_FALSE(is_goal_rooted(Algorithm::AstarPo));
}

TEST_CASE("plan finds the diagonal on an empty 3x3 grid") {
    const Workspace ws = testing::open_workspace(3, 3);
    for (Algorithm a : {Algorithm::Astar, Algorithm::Dstar, Algorithm::DstarPo,
                        Algorithm::AstarPo}) {
        const PlanResult res = plan(ws, distance_only(a));
        CHECK(res.metrics.length == doctest::Approx(2.0 * kSqrt2));
        CHECK(res.path.front() == ws.start);
        CHECK(res.path.back() == ws.goal);
        CHECK(res.trace.records.size() == res.metrics.expansions);
        CHECK(res.trace.policy == (is_pareto(a) ? "pareto" : "composite"));
    }
}

TEST_CASE("plan handles the degenerate 1x2 grid") {
    Workspace ws = testing::open_workspace(2, 1);
    const PlanResult res = plan(ws, distance_only(Algorithm::Astar));
    CHECK(res.path == std::vector<GridCoord>{{0, 0}, {0, 1}});
    CHECK(res.metrics.length == 1.0);
}

TEST_CASE("plan reports NoPath when the goal is walled off") {
    Workspace ws = testing::open_workspace(6, 6);
    for (const GridCoord& n : successors(ws, ws.goal)) ws.grid.set(n, true);
    CHECK_THROWS_AS(plan(ws, distance_only(Algorithm::Astar)), NoPathError);
    CHECK_THROWS_AS(plan(ws, distance_only(Algorithm::Dstar)), NoPathError);
    CHECK_THROWS_AS(plan(ws, default_planner_config(Algorithm::DstarPo)),
                    NoPathError);
}

TEST_CASE("plan enforces the expansion budget") {
    const Workspace ws = testing::open_workspace(8, 8);
    PlannerConfig config = distance_only(Algorithm::Astar);
    config.max_expansions = 2;
    CHECK_THROWS_AS(plan(ws, config), BudgetError);
}

TEST_CASE("plan validates workspace and weights") {
    Workspace ws = testing::open_workspace(4, 4);
    ws.goal = ws.start;
    CHECK_THROWS_AS(plan(ws, distance_only(Algorithm::Astar)), ConfigError);

    const Workspace ok = testing::open_workspace(4, 4);
    PlannerConfig config;
    config.weights = Weights{0, 0, 0, 0, 0};
    CHECK_THROWS_AS(plan(ok, config), ConfigError);
    config.weights = Weights{1, -1, 0, 0, 0};
    CHECK_THROWS_AS(plan(ok, config), ConfigError);
}

TEST_CASE("trace records every expansion in order") {
    const Workspace ws = generate_random_workspace(21, 15, 15, 0.2);
    PlannerConfig config = default_planner_config(Algorithm::DstarPo);
    config.trace_front_size = true;
    const PlanResult res = plan(ws, config);

    REQUIRE(!res.trace.records.empty());
    for (size_t i = 0; i < res.trace.records.size(); ++i) {
        const TraceRecord& rec = res.trace.records[i];
        CHECK(rec.expansion_index == i);
        CHECK(rec.open_list_size >= 1);
        REQUIRE(rec.front_size.has_value());
        CHECK(*rec.front_size >= 1);
        CHECK(*rec.front_size <= rec.open_list_size);
    }

    const std::string ndjson = res.trace.to_ndjson();
    CHECK(std::count(ndjson.begin(), ndjson.end(), '\n') ==
          long(res.trace.records.size()));
    CHECK(ndjson.find("\"policy\":\"pareto\"") != std::string::npos);
    CHECK(ndjson.find("\"frontSize\":") != std::string::npos);
}

TEST_CASE("identical workspace and config replay bit-for-bit") {
    const Workspace ws = generate_random_workspace(33, 20, 20, 0.25);
    for (Algorithm a : {Algorithm::Astar, Algorithm::Dstar, Algorithm::DstarPo}) {
        const PlanResult r1 = plan(ws, default_planner_config(a));
        const PlanResult r2 = plan(ws, default_planner_config(a));
        CHECK(r1.path == r2.path);
        CHECK(r1.metrics.length == r2.metrics.length);
        CHECK(r1.metrics.solar_deviation == r2.metrics.solar_deviation);
        REQUIRE(r1.trace.records.size() == r2.trace.records.size());
        for (size_t i = 0; i < r1.trace.records.size(); ++i) {
            CHECK(r1.trace.records[i].chosen_cell == r2.trace.records[i].chosen_cell);
            CHECK(r1.trace.records[i].open_list_size ==
                  r2.trace.records[i].open_list_size);
            CHECK(r1.trace.records[i].snapshot_hash ==
                  r2.trace.records[i].snapshot_hash);
        }
    }
}

TEST_CASE("distance-only planners match the Dijkstra oracle") {
    for (uint64_t seed = 100; seed < 112; ++seed) {
        const Workspace ws = generate_random_workspace(seed, 20, 20, 0.25);
        const auto oracle =
            testing::dijkstra_distance(ws.grid, ws.start, ws.goal);
        REQUIRE(oracle.has_value());
        for (Algorithm a :
             {Algorithm::Astar, Algorithm::Dstar, Algorithm::DstarPo}) {
            const PlanResult res = plan(ws, distance_only(a));
            CHECK(res.metrics.length == doctest::Approx(*oracle).epsilon(1e-12));
        }
    }
}

TEST_CASE("astar-po with the composite-sum selector collapses onto astar") {
    // An all-positive-weight selector turns front selection into the plain
    // composite argmin, so the two searches expand identically.
    for (uint64_t seed = 0; seed < 4; ++seed) {
        const Workspace ws = generate_random_workspace(seed, 25, 25, 0.25);
        const PlanResult a = plan(ws, default_planner_config(Algorithm::Astar));
        const PlanResult b = plan(ws, default_planner_config(Algorithm::AstarPo));
        CHECK(a.path == b.path);
    }
}

TEST_CASE("expand_policy_composite picks the normalized argmin") {
    SUBCASE("dominating node wins") {
        const std::vector<SearchNode> open{
            node({5, 5}, {4.0, 3.0, 1.0, 0.5, 0.2}),
            node({2, 2}, {1.0, 1.0, 0.0, 0.0, 0.0}),
            node({3, 3}, {2.0, 2.0, 0.5, 0.2, 0.1})};
        CHECK(expand_policy_composite(open, kEqualWeights) == 1);
    }
    SUBCASE("identical vectors break ties lexicographically") {
        const ObjectiveVector v{1.0, 2.0, 0.1, 0.0, 0.3};
        const std::vector<SearchNode> open{node({4, 7}, v), node({4, 2}, v),
                                           node({5, 0}, v)};
        CHECK(expand_policy_composite(open, kEqualWeights) == 1);
    }
    SUBCASE("single node returns immediately") {
        const std::vector<SearchNode> open{node({1, 1}, {1, 1, 1, 1, 1})};
        CHECK(expand_policy_composite(open, kEqualWeights) == 0);
    }
    SUBCASE("empty open list throws") {
        CHECK_THROWS_AS(expand_policy_composite({}, kEqualWeights),
                        InvalidQueryError);
    }
}

TEST_CASE("expand_policy_pareto selects off the front") {
    SUBCASE("a node dominating all others wins regardless of selector") {
        const std::vector<SearchNode> open{
            node({9, 9}, {3.0, 3.0, 1.0, 1.0, 1.0}),
            node({0, 0}, {1.0, 1.0, 0.1, 0.1, 0.1}),
            node({5, 5}, {2.0, 2.0, 0.5, 0.5, 0.5})};
        for (int idx = 0; idx < 5; ++idx) {
            CHECK(expand_policy_pareto(
                      open, PrioritySelector::single_objective(idx)) == 1);
        }
        CHECK(expand_policy_pareto(open, PrioritySelector::composite_sum()) == 1);
    }
    SUBCASE("incomparable front resolved by the composite selector") {
        // Normalized columns: node 0 -> (0,1,...), node 1 -> (1,0,...): the
        // remaining columns decide. Node 1 carries the smaller tail sum.
        const std::vector<SearchNode> open{
            node({1, 1}, {1.0, 5.0, 0.8, 0.0, 0.0}),
            node({2, 2}, {2.0, 4.0, 0.2, 0.0, 0.0})};
        CHECK(expand_policy_pareto(open, PrioritySelector::composite_sum()) == 1);
    }
    SUBCASE("fully tied front falls back to the smallest coord") {
        const ObjectiveVector v{1.0, 1.0, 1.0, 1.0, 1.0};
        const std::vector<SearchNode> open{node({3, 3}, v), node({1, 9}, v),
                                           node({1, 4}, v)};
        CHECK(expand_policy_pareto(open, PrioritySelector::composite_sum()) == 2);
    }
    SUBCASE("empty open list throws") {
        CHECK_THROWS_AS(
            expand_policy_pareto({}, PrioritySelector::composite_sum()),
            InvalidQueryError);
    }
}

TEST_CASE("engine selection equals the literal expansion policies") {
    const Workspace ws = generate_random_workspace(55, 18, 18, 0.2);

    SUBCASE("composite engine vs expand_policy_composite") {
        PlannerConfig config = default_planner_config(Algorithm::Astar);
        size_t checked = 0;
        config.selection_probe = [&](const std::vector<SearchNode>& open,
                                     size_t chosen) {
            CHECK(expand_policy_composite(open, kEqualWeights) == chosen);
            ++checked;
        };
        const PlanResult res = plan(ws, config);
        CHECK(checked == res.metrics.expansions);
    }

    SUBCASE("pareto engine vs expand_policy_pareto") {
        PlannerConfig config = default_planner_config(Algorithm::DstarPo);
        size_t checked = 0;
        config.selection_probe = [&](const std::vector<SearchNode>& open,
                                     size_t chosen) {
            CHECK(expand_policy_pareto(open, config.selector) == chosen);
            ++checked;
        };
        const PlanResult res = plan(ws, config);
        CHECK(checked == res.metrics.expansions);
    }
}

TEST_CASE("pareto expansions are non-dominated in their open-list snapshot") {
    const Workspace ws = generate_random_workspace(77, 20, 20, 0.25);
    PlannerConfig config = default_planner_config(Algorithm::DstarPo);
    size_t audited = 0;
    config.snapshot_sink = [&](const OpenSnapshot& snap) {
        REQUIRE(snap.chosen_slot < snap.coords.size());
        CHECK(snap.coords[snap.chosen_slot] == snap.chosen);
        const auto& mine = snap.normalized[snap.chosen_slot];
        for (size_t i = 0; i < snap.normalized.size(); ++i) {
            if (i == snap.chosen_slot) continue;
            CHECK_FALSE(dominates(snap.normalized[i], mine));
        }
        ++audited;
    };
    const PlanResult res = plan(ws, config);
    CHECK(audited == res.metrics.expansions);
}

TEST_CASE("dstar_initial_plan crosses the empty 5x5 grid diagonally") {
    const Workspace ws = testing::open_workspace(5, 5);
    const auto [path, field] = dstar_initial_plan(ws, distance_only(Algorithm::Dstar));
    CHECK(path.size() == 5);
    CHECK(path_length(path) == doctest::Approx(4.0 * kSqrt2));
    CHECK(path.front() == ws.start);
    CHECK(path.back() == ws.goal);

    // The exported field is goal-rooted: extracting from start reproduces the
    // path; the goal entry is the root.
    CHECK(extract_path(field, ws.start) == path);
    REQUIRE(field.pointers.count(ws.goal) == 1);
    CHECK_FALSE(field.pointers.at(ws.goal).has_value());
}

TEST_CASE("dstar_initial_plan degenerate and failure cases") {
    SUBCASE("adjacent start and goal") {
        Workspace ws = testing::open_workspace(10, 10);
        ws.goal = {0, 1};
        const auto [path, field] =
            dstar_initial_plan(ws, distance_only(Algorithm::Dstar));
        CHECK(path == std::vector<GridCoord>{{0, 0}, {0, 1}});
    }
    SUBCASE("sealed goal") {
        Workspace ws = testing::open_workspace(6, 6);
        for (const GridCoord& n : successors(ws, ws.goal)) ws.grid.set(n, true);
        CHECK_THROWS_AS(dstar_initial_plan(ws, distance_only(Algorithm::Dstar)),
                        NoPathError);
    }
    SUBCASE("start-rooted algorithms are rerouted to dstar") {
        const Workspace ws = testing::open_workspace(5, 5);
        const auto [path, field] =
            dstar_initial_plan(ws, distance_only(Algorithm::Astar));
        CHECK(path.front() == ws.start);  // still a start-to-goal path
        CHECK(path_length(path) == doctest::Approx(4.0 * kSqrt2));
    }
}

TEST_CASE("DstarPlanner constructor rejects bad configurations") {
    const Workspace ws = testing::open_workspace(5, 5);
    CHECK_THROWS_AS(DstarPlanner(ws, distance_only(Algorithm::Astar)), ConfigError);

    PlannerConfig config = distance_only(Algorithm::Dstar);
    config.accumulation = AccumulationMode::Instantaneous;
    CHECK_THROWS_AS(DstarPlanner(ws, config), ConfigError);
}

TEST_CASE("replan leaves the path alone when an off-route cell blocks") {
    const Workspace ws = testing::open_workspace(7, 7);
    DstarPlanner planner(ws, distance_only(Algorithm::Dstar));
    const PlanResult initial = planner.initial_plan();

    const std::vector<CostChangeEvent> events{{{0, 5}, CellState::Occupied}};
    const auto repaired = planner.replan(events, ws.start);
    CHECK(repaired == initial.path);
    CHECK(planner.workspace().grid.occupied({0, 5}));
}

TEST_CASE("replan detours around a blocked corridor like a fresh plan") {
    // A full wall across row 3 with gaps at columns 1 and 7. The initial path
    // uses the nearer gap; blocking it forces the detour through the other.
    Workspace ws = testing::open_workspace(9, 9);
    for (int c = 0; c < 9; ++c) ws.grid.set({3, c}, true);
    ws.grid.set({3, 1}, false);
    ws.grid.set({3, 7}, false);
    ws.elevation.at({4, 6}) = 0.6;  // give the detour some elevation texture
    ws.elevation.at({2, 2}) = 0.3;

    PlannerConfig config;
    config.algorithm = Algorithm::Dstar;
    config.weights = kEqualWeights;

    DstarPlanner planner(ws, config);
    const PlanResult initial = planner.initial_plan();
    const bool through_near_gap =
        std::find(initial.path.begin(), initial.path.end(), GridCoord{3, 1}) !=
        initial.path.end();
    CHECK(through_near_gap);

    const std::vector<CostChangeEvent> events{{{3, 1}, CellState::Occupied}};
    const auto repaired = planner.replan(events, ws.start);
    CHECK(std::find(repaired.begin(), repaired.end(), GridCoord{3, 7}) !=
          repaired.end());
    CHECK(planner.last_repair_stats().pops > 0);

    Workspace updated = ws;
    updated.grid.set({3, 1}, true);
    DstarPlanner fresh(updated, config);
    const PlanResult scratch = fresh.initial_plan();
    CHECK(static_path_cost(updated, repaired, kEqualWeights) ==
          doctest::Approx(static_path_cost(updated, scratch.path, kEqualWeights))
              .epsilon(1e-9));
    // The repaired path is structurally valid on the updated map.
    CHECK_NOTHROW(path_metrics(updated, repaired, 0.0, 0));
}

TEST_CASE("replan shortens when a shortcut cell frees up") {
    Workspace ws = testing::open_workspace(9, 9);
    for (int c = 0; c < 8; ++c) ws.grid.set({4, c}, true);  // wall, gap at col 8

    DstarPlanner planner(ws, distance_only(Algorithm::Dstar));
    const PlanResult initial = planner.initial_plan();

    const std::vector<CostChangeEvent> events{{{4, 3}, CellState::Free}};
    const auto repaired = planner.replan(events, ws.start);
    CHECK(path_length(repaired) <= path_length(initial.path));
    CHECK(path_length(repaired) < path_length(initial.path));  // strictly here
}

TEST_CASE("replan error taxonomy") {
    const Workspace ws = testing::open_workspace(6, 6);
    PlannerConfig config = distance_only(Algorithm::Dstar);

    SUBCASE("replan before initial_plan") {
        DstarPlanner planner(ws, config);
        CHECK_THROWS_AS(planner.replan({}, ws.start), InvalidQueryError);
    }
    SUBCASE("events may not touch start or goal") {
        DstarPlanner planner(ws, config);
        planner.initial_plan();
        CHECK_THROWS_AS(
            planner.replan({{ws.goal, CellState::Occupied}}, ws.start),
            InvalidQueryError);
    }
    SUBCASE("severing the robot yields NoPath") {
        DstarPlanner planner(ws, config);
        planner.initial_plan();
        std::vector<CostChangeEvent> events;
        for (const GridCoord& n : successors(ws, ws.start)) {
            events.push_back({n, CellState::Occupied});
        }
        CHECK_THROWS_AS(planner.replan(events, ws.start), NoPathError);
    }
    SUBCASE("robot position checks") {
        DstarPlanner planner(ws, config);
        planner.initial_plan();
        CHECK_THROWS_AS(planner.replan({}, GridCoord{9, 9}), InvalidQueryError);
        CHECK_THROWS_AS(planner.replan({}, ws.goal), InvalidQueryError);
    }
}

TEST_CASE("replan cost equals from-scratch planning on random scenarios") {
    SeededRng rng(777);
    int exercised = 0;
    for (uint64_t seed = 300; seed < 312; ++seed) {
        const Workspace ws = generate_random_workspace(seed, 20, 20, 0.25);
        for (Algorithm algorithm : {Algorithm::Dstar, Algorithm::DstarPo}) {
            const PlannerConfig config = default_planner_config(algorithm);
            DstarPlanner planner(ws, config);
            planner.initial_plan();

            // 1-5 random occupancy flips away from start/goal.
            std::vector<CostChangeEvent> events;
            Workspace updated = ws;
            const int count = rng.uniform_int(1, 5);
            for (int i = 0; i < count; ++i) {
                const GridCoord cell{rng.uniform_int(0, 19), rng.uniform_int(0, 19)};
                if (cell == ws.start || cell == ws.goal) continue;
                const bool occupy = updated.grid.free(cell);
                events.push_back({cell, occupy ? CellState::Occupied
                                               : CellState::Free});
                updated.grid.set(cell, occupy);
            }

            const Weights relax = is_pareto(algorithm)
                                      ? config.selector.effective_weights()
                                      : config.weights;
            try {
                const auto repaired = planner.replan(events, ws.start);
                DstarPlanner fresh(updated, config);
                const PlanResult scratch = fresh.initial_plan();
                CHECK(static_path_cost(updated, repaired, relax) ==
                      doctest::Approx(
                          static_path_cost(updated, scratch.path, relax))
                          .epsilon(1e-9));
                ++exercised;
            } catch (const NoPathError&) {
                // The events must genuinely sever the map for both.
                CHECK_THROWS_AS(DstarPlanner(updated, config).initial_plan(),
                                NoPathError);
            }
        }
    }
    CHECK(exercised >= 12);  // most random scenarios stay connected
}

TEST_CASE("extract_path follows chains and rejects corrupt fields") {
    BackPointerField field;

    SUBCASE("chain of length 1") {
        field.pointers[{0, 0}] = GridCoord{0, 1};
        field.pointers[{0, 1}] = std::nullopt;
        CHECK(extract_path(field, {0, 0}) ==
              std::vector<GridCoord>{{0, 0}, {0, 1}});
    }
    SUBCASE("10-step chain gives 11 adjacent waypoints") {
        GridCoord at{0, 0};
        for (int i = 0; i < 10; ++i) {
            const GridCoord next{at.row + (i % 2), at.col + 1};
            field.pointers[at] = next;
            at = next;
        }
        field.pointers[at] = std::nullopt;
        const auto path = extract_path(field, {0, 0});
        REQUIRE(path.size() == 11);
        for (size_t i = 1; i < path.size(); ++i) {
            CHECK(cells_adjacent8(path[i - 1], path[i]));
        }
    }
    SUBCASE("cycle detection") {
        field.pointers[{0, 0}] = GridCoord{0, 1};
        field.pointers[{0, 1}] = GridCoord{0, 0};
        CHECK_THROWS_AS(extract_path(field, {0, 0}), CorruptStateError);
    }
    SUBCASE("dangling pointer") {
        field.pointers[{0, 0}] = GridCoord{0, 1};
        CHECK_THROWS_AS(extract_path(field, {0, 0}), CorruptStateError);
    }
    SUBCASE("non-adjacent link") {
        field.pointers[{0, 0}] = GridCoord{0, 5};
        field.pointers[{0, 5}] = std::nullopt;
        CHECK_THROWS_AS(extract_path(field, {0, 0}), CorruptStateError);
    }
    SUBCASE("unknown origin") {
        CHECK_THROWS_AS(extract_path(field, {3, 3}), CorruptStateError);
    }
}

TEST_CASE("static_path_cost sums the arrival-cell composite") {
    Workspace ws = testing::open_workspace(6, 6);
    ws.elevation.at({1, 1}) = 0.5;
    ws.risk.center = {5, 0};
    const std::vector<GridCoord> path{{0, 0}, {1, 1}, {1, 2}};

    const double expected = 1.0 * kSqrt2 + 1.0 * 0.5 +
                            1.0 * risk_at(ws.risk, {1, 1}) + 1.0 * 1.0 +
                            1.0 * risk_at(ws.risk, {1, 2});
    CHECK(static_path_cost(ws, path, kEqualWeights) ==
          doctest::Approx(expected));
    // h and s weights never contribute.
    CHECK(static_path_cost(ws, path, Weights{1, 99, 1, 99, 1}) ==
          doctest::Approx(expected));
    CHECK(static_path_cost(ws, path, kDistanceOnlyWeights) ==
          doctest::Approx(kSqrt2 + 1.0));
    CHECK_THROWS_AS(static_path_cost(ws, {{0, 0}}, kEqualWeights),
                    InvalidStepError);
}
