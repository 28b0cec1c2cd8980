#include "longhot/episode.hpp"
#include "longhot/scene_gen.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

using namespace longhot;

namespace {

// Re-verify every episode constraint from scratch with fresh distance fields.
void check_episode_constraints(const OccupancyGrid& grid, const Episode& e) {
    REQUIRE(grid.point_free(e.goal));
    REQUIRE(grid.point_free(e.container));
    REQUIRE(grid.point_free(e.start.position));
    REQUIRE(e.start.heading_deg % kTurnDeg == 0);
    REQUIRE(e.start.heading_deg >= 0);
    REQUIRE(e.start.heading_deg < 360);

    const DistanceField goal_field(grid, e.goal);
    const auto in_band = [&](const Point& p) {
        const double d = goal_field.meters_at(p);
        return d >= e.level.goal_range_min && d <= e.level.goal_range_max;
    };
    for (const auto& o : e.objects) {
        REQUIRE(grid.point_free(o.position));
        REQUIRE(in_band(o.position));
    }
    REQUIRE(in_band(e.container));
    REQUIRE(in_band(e.start.position));

    for (size_t i = 0; i < e.objects.size(); ++i) {
        const DistanceField f(grid, e.objects[i].position);
        bool has_near_neighbor = e.objects.size() == 1;
        for (size_t j = 0; j < e.objects.size(); ++j) {
            if (i == j) continue;
            const double d = f.meters_at(e.objects[j].position);
            REQUIRE(d >= e.level.obj_dist_min);
            REQUIRE(std::isfinite(d)); // mutually reachable
            if (d <= e.level.obj_dist_max) has_near_neighbor = true;
        }
        REQUIRE(has_near_neighbor);
    }
}

} // namespace

TEST_CASE("sampled episodes satisfy every constraint, re-verified independently") {
    SceneSpec spec;
    spec.extent_m = 30.0;
    const OccupancyGrid grid = generate_scene(11, spec);

    for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        const Episode e = sample_episode(grid, named_level("default"), seed);
        REQUIRE(e.objects.size() == 4);
        check_episode_constraints(grid, e);
    }
}

TEST_CASE("vacuous constraints are always feasible on a connected grid") {
    OccupancyGrid grid(12, 12, 0.25);
    grid.close_boundary();
    LevelParams level;
    level.name = "vacuous";
    level.goal_range_min = 0.0;
    level.goal_range_max = 1e18;
    level.obj_dist_min = 0.0;
    level.obj_dist_max = 1e18;
    level.target_count = 4;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const Episode e = sample_episode(grid, level, seed);
        REQUIRE(e.objects.size() == 4);
    }
}

TEST_CASE("a level with more targets extends the smaller level's episode") {
    SceneSpec spec;
    spec.extent_m = 30.0;
    const OccupancyGrid grid = generate_scene(11, spec);

    LevelParams base = named_level("default");
    LevelParams extended = base;
    extended.target_count = 8;

    const Episode e4 = sample_episode(grid, base, 77);
    const Episode e8 = sample_episode(grid, extended, 77);
    REQUIRE(e8.objects.size() == 8);
    check_episode_constraints(grid, e8);

    CHECK(e4.goal == e8.goal);
    CHECK(e4.container == e8.container);
    CHECK(e4.start == e8.start);
    for (size_t i = 0; i < 4; ++i) CHECK(e4.objects[i].position == e8.objects[i].position);
}

TEST_CASE("infeasible levels fail with a bounded budget") {
    OccupancyGrid grid(20, 20, 0.25);
    grid.close_boundary();
    LevelParams level = named_level("harder");
    level.goal_range_min = 25.0; // far beyond any distance on a 5 m map
    CHECK_THROWS_AS(sample_episode(grid, level, 1), InfeasibleLevel);

    LevelParams bad;
    bad.goal_range_min = 5.0;
    bad.goal_range_max = 2.0;
    CHECK_THROWS_AS(sample_episode(grid, bad, 1), InfeasibleLevel);
}

TEST_CASE("suites round-robin over scenes and are byte-deterministic") {
    SceneSpec spec;
    spec.extent_m = 15.0;
    spec.room_count = 4;
    std::vector<Scene> scenes;
    for (int s = 0; s < 5; ++s)
        scenes.push_back({"scene_" + std::to_string(s), generate_scene(100 + static_cast<uint64_t>(s), spec)});

    LevelParams level;
    level.name = "small";
    level.goal_range_min = 1.0;
    level.goal_range_max = 10.0;
    level.obj_dist_min = 1.0;
    level.obj_dist_max = 8.0;
    level.target_count = 3;

    const auto suite = build_suite(scenes, level, 100, 42);
    REQUIRE(suite.size() == 100);
    std::map<std::string, int> per_scene;
    for (const auto& e : suite) per_scene[e.scene_id]++;
    REQUIRE(per_scene.size() == 5);
    for (const auto& [id, n] : per_scene) CHECK(n == 20);

    const auto again = build_suite(scenes, level, 100, 42);
    CHECK(suite_to_json(suite) == suite_to_json(again));

    const auto loaded = suite_from_json(suite_to_json(suite));
    CHECK(suite_to_json(loaded) == suite_to_json(suite));
}

TEST_CASE("suite propagates infeasibility with the scene id") {
    OccupancyGrid tiny(16, 16, 0.25);
    tiny.close_boundary();
    std::vector<Scene> scenes{{"scene_tiny", tiny}};
    LevelParams level = named_level("harder");
    level.goal_range_min = 25.0;
    try {
        build_suite(scenes, level, 2, 1);
        FAIL("expected InfeasibleLevel");
    } catch (const InfeasibleLevel& e) {
        CHECK(std::string(e.what()).find("scene_tiny") != std::string::npos);
    }
}
