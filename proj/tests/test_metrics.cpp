#include "longhot/metrics.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace longhot;
using longhot::test::center;
using longhot::test::grid_from_ascii;

namespace {

Episode corridor_episode(const OccupancyGrid& grid) {
    // collinear: start 0 m, container 2 m, objects at 4/6/8 m, goal 10 m
    Episode e;
    e.level.target_count = 3;
    e.start = {center(grid, 2, 2), 0};
    e.container = {e.start.position.x + 2.0, e.start.position.y};
    e.objects.push_back({0, 0, {e.start.position.x + 4.0, e.start.position.y}});
    e.objects.push_back({1, 1, {e.start.position.x + 6.0, e.start.position.y}});
    e.objects.push_back({2, 2, {e.start.position.x + 8.0, e.start.position.y}});
    e.goal = {e.start.position.x + 10.0, e.start.position.y};
    return e;
}

// Run a scripted action list through the env and return the trace.
std::vector<TraceRecord> run_actions(const OccupancyGrid& grid, const Episode& e,
                                     const std::vector<Action>& actions) {
    EnvSim env(grid, e);
    std::vector<TraceRecord> trace;
    for (const Action a : actions) {
        const StepResult r = env.step(a);
        trace.push_back(make_trace_record(env.state().t, a, env.state(), r.done, r.reason));
        if (r.done) break;
    }
    return trace;
}

} // namespace

TEST_CASE("reference length: corridor hand-sum and K=1 decomposition") {
    OccupancyGrid grid(48, 5, 0.25);
    grid.close_boundary();
    const Episode e = corridor_episode(grid);
    CHECK(reference_length(grid, e) == Catch::Approx(10.0).epsilon(1e-12));

    Episode single;
    single.level.target_count = 1;
    single.start = {center(grid, 2, 2), 0};
    single.container = {center(grid, 10, 2)};
    single.objects.push_back({0, 0, center(grid, 20, 2)});
    single.goal = center(grid, 30, 2);
    const double expected = geodesic(grid, single.start.position, single.container) +
                            geodesic(grid, single.container, single.objects[0].position) +
                            geodesic(grid, single.objects[0].position, single.goal);
    CHECK(reference_length(grid, single) == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("reference length equals the independent greedy-chain oracle on random fixtures") {
    Rng rng(55);
    for (int trial = 0; trial < 12; ++trial) {
        OccupancyGrid grid(20, 20, 0.25);
        grid.close_boundary();
        for (int i = 0; i < 30; ++i)
            grid.set({static_cast<int>(rng.next_int(1, 18)), static_cast<int>(rng.next_int(1, 18))},
                     Cell::Obstacle);
        if (!free_region_connected(grid)) continue;

        auto free_cells = grid.free_cell_indices();
        auto pick = [&]() { return grid.center_of(grid.cell_at(free_cells[rng.next_below(free_cells.size())])); };

        Episode e;
        e.level.target_count = 4;
        e.start = {pick(), 0};
        e.container = pick();
        std::vector<Point> objects;
        for (int k = 0; k < 4; ++k) {
            e.objects.push_back({k, k, pick()});
            objects.push_back(e.objects.back().position);
        }
        e.goal = pick();

        const double expected =
            oracle::greedy_reference_tour(grid, e.start.position, e.container, objects, e.goal);
        CHECK(reference_length(grid, e) == Catch::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("unreachable reference legs raise InfeasibleEpisode") {
    const OccupancyGrid grid = grid_from_ascii({
        "........#....",
        "........#....",
        "........#....",
    });
    Episode e;
    e.level.target_count = 1;
    e.start = {center(grid, 1, 1), 0};
    e.container = center(grid, 2, 1);
    e.objects.push_back({0, 0, center(grid, 3, 1)});
    e.goal = center(grid, 11, 1); // behind the full wall
    CHECK_THROWS_AS(reference_length(grid, e), InfeasibleEpisode);
}

TEST_CASE("scoring: full success with the reference path gives spl 1") {
    OccupancyGrid grid(48, 5, 0.25);
    grid.close_boundary();
    const Episode e = corridor_episode(grid);

    // walk the reference tour: forward to container, pick, ... drop at goal
    std::vector<Action> actions;
    auto forwards = [&](int n) { actions.insert(actions.end(), static_cast<size_t>(n), Action::Forward); };
    forwards(8); // 2 m to the container
    actions.push_back(Action::Pickup);
    forwards(8);
    actions.push_back(Action::Pickup);
    forwards(8);
    actions.push_back(Action::Pickup);
    forwards(8);
    actions.push_back(Action::Pickup);
    forwards(8); // at the goal
    actions.push_back(Action::Drop);

    const auto trace = run_actions(grid, e, actions);
    REQUIRE(trace.back().reason == Termination::Success);
    const EpisodeResult r = score_trace(grid, e, trace);

    CHECK(r.success);
    CHECK(r.progress == 1.0);
    CHECK(r.path_length_m == Catch::Approx(10.0).epsilon(1e-12));
    CHECK(r.spl == 1.0);
    CHECK(r.ppl == 1.0);
    CHECK(r.energy == 0.0);
    CHECK(r.picked == 1.0);
}

TEST_CASE("scoring: inefficient success discounts spl by G_ref/G_pl") {
    OccupancyGrid grid(48, 9, 0.25);
    grid.close_boundary();
    const Episode e = corridor_episode(grid);

    std::vector<Action> actions;
    auto forwards = [&](int n) { actions.insert(actions.end(), static_cast<size_t>(n), Action::Forward); };
    // a 2 m detour (1 m up and back) before the same tour: G_pl = 1.2 * G_ref
    actions.push_back(Action::TurnLeft);
    actions.push_back(Action::TurnLeft);
    actions.push_back(Action::TurnLeft); // heading 90
    forwards(4);
    actions.insert(actions.end(), 6, Action::TurnLeft); // turn around to 270
    forwards(4);
    actions.insert(actions.end(), 3, Action::TurnLeft); // back to heading 0
    forwards(8);
    actions.push_back(Action::Pickup);
    forwards(8);
    actions.push_back(Action::Pickup);
    forwards(8);
    actions.push_back(Action::Pickup);
    forwards(8);
    actions.push_back(Action::Pickup);
    forwards(8);
    actions.push_back(Action::Drop);

    const auto trace = run_actions(grid, e, actions);
    REQUIRE(trace.back().reason == Termination::Success);
    const EpisodeResult r = score_trace(grid, e, trace);
    CHECK(r.path_length_m == Catch::Approx(12.0).epsilon(1e-12));
    CHECK(r.spl == Catch::Approx(10.0 / 12.0).epsilon(1e-9));
    CHECK(r.ppl == r.spl);
}

TEST_CASE("scoring: the idle agent keeps energy 1 and earns nothing") {
    OccupancyGrid grid(48, 5, 0.25);
    grid.close_boundary();
    const Episode e = corridor_episode(grid);
    EnvConfig cfg;
    cfg.max_steps = 4;
    EnvSim env(grid, e, cfg);
    std::vector<TraceRecord> trace;
    for (int i = 0; i < 4; ++i) {
        const StepResult r = env.step(Action::TurnLeft);
        trace.push_back(make_trace_record(env.state().t, Action::TurnLeft, env.state(), r.done, r.reason));
    }
    const EpisodeResult r = score_trace(grid, e, trace);
    CHECK(r.energy == 1.0);
    CHECK(r.progress == 0.0);
    CHECK(r.spl == 0.0);
    CHECK(r.ppl == 0.0);
    CHECK(r.picked == 0.0);
    CHECK(r.path_length_m == 0.0);
}

TEST_CASE("scoring: partial delivery gives fractional progress and picked") {
    OccupancyGrid grid(48, 5, 0.25);
    grid.close_boundary();
    Episode e = corridor_episode(grid);
    e.level.target_count = 3;

    std::vector<Action> actions;
    auto forwards = [&](int n) { actions.insert(actions.end(), static_cast<size_t>(n), Action::Forward); };
    forwards(16); // skip the container, go to object 0
    actions.push_back(Action::Pickup); // object 0 (container out of range at 2 m back? it is 2 m behind: out of 1.5)
    forwards(8);
    actions.push_back(Action::Pickup); // object 1
    forwards(16); // to the goal
    actions.push_back(Action::Drop);   // delivers 2 of 3

    const auto trace = run_actions(grid, e, actions);
    const EpisodeResult r = score_trace(grid, e, trace);
    CHECK(r.progress == Catch::Approx(2.0 / 3.0));
    CHECK(r.picked == Catch::Approx(2.0 / 3.0));
    CHECK_FALSE(r.success);
    CHECK(r.spl == 0.0);
    CHECK(r.ppl == Catch::Approx((2.0 / 3.0) * 1.0)); // path 10 m = G_ref
    CHECK(r.energy == Catch::Approx((8.0 - 6.0) / (6.0 + 4.0 + 2.0)));
}

TEST_CASE("aggregate: means, percentages, and per-level breakdown") {
    std::vector<EpisodeResult> results;
    EpisodeResult a;
    a.success = true;
    a.progress = 1.0;
    a.spl = 0.8;
    a.ppl = 0.8;
    a.energy = 0.0;
    a.picked = 1.0;
    a.level_name = "default";
    EpisodeResult b;
    b.success = false;
    b.progress = 0.5;
    b.spl = 0.0;
    b.ppl = 0.4;
    b.energy = 0.5;
    b.picked = 0.5;
    b.level_name = "hard";
    results.push_back(a);
    results.push_back(b);

    const SuiteSummary s = aggregate(results);
    CHECK(s.episodes == 2);
    CHECK(s.success_pct == Catch::Approx(50.0));
    CHECK(s.progress_pct == Catch::Approx(75.0));
    CHECK(s.spl_mean == Catch::Approx(0.4));
    CHECK(s.picked_pct == Catch::Approx(75.0));

    const auto by_level = aggregate_by_level(results);
    CHECK(by_level.at("default").success_pct == 100.0);
    CHECK(by_level.at("hard").success_pct == 0.0);

    // all-zero-progress suite
    EpisodeResult c;
    c.progress = 0.0;
    const SuiteSummary zero = aggregate({c});
    CHECK(zero.progress_pct == 0.0);

    // errors are excluded from the means but counted
    EpisodeResult err;
    err.error = "boom";
    const SuiteSummary with_err = aggregate({a, err});
    CHECK(with_err.errors == 1);
    CHECK(with_err.success_pct == 100.0);

    const std::string csv = results_to_csv(results);
    CHECK(csv.find("episode_id,scene_id") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
