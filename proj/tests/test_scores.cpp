#include "longhot/scores.hpp"

#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace longhot;
using longhot::test::center;
using longhot::test::grid_from_ascii;

namespace {

struct Fixture {
    OccupancyGrid grid;
    Episode episode;
    EnvSim env;
    Observation obs;

    Fixture(OccupancyGrid g, Episode e) : grid(std::move(g)), episode(std::move(e)), env(grid, episode) {
        obs = env.sense();
    }

    ScoreContext ctx() {
        return {grid, env.fields(), env.state(), episode, env.ids(), obs, env.state().t, {}};
    }
};

Episode simple_episode(const OccupancyGrid& grid, Point object, Pose start) {
    Episode e;
    e.level.target_count = 1;
    e.objects.push_back({0, 0, object});
    e.container = center(grid, 1, 1);
    e.goal = center(grid, 1, 2);
    e.start = start;
    return e;
}

} // namespace

TEST_CASE("closeness label formula") {
    CHECK(closeness_label(1.5) == Catch::Approx(0.7));
    CHECK(closeness_label(5.0) == 0.0);
    CHECK(closeness_label(7.0) == 0.0);
    CHECK(closeness_label(0.0) == 1.0);
}

TEST_CASE("closeness is 1-Lipschitz in distance scaled by 1/5") {
    Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
        const double d1 = rng.next_double(0.0, 8.0);
        const double d2 = rng.next_double(0.0, 8.0);
        CHECK(std::abs(closeness_label(d1) - closeness_label(d2)) <= std::abs(d1 - d2) / 5.0 + 1e-12);
    }
}

TEST_CASE("oracle closeness: visible distance, boundary, occlusion") {
    // open 10 m corridor; agent faces the object
    OccupancyGrid grid(44, 9, 0.25);
    grid.close_boundary();

    SECTION("visible object at 1.5 m scores 0.7") {
        Fixture f(grid, simple_episode(grid, center(grid, 10, 4), {center(grid, 4, 4), 0}));
        ScoreProvider oracle(ProviderKind::Oracle);
        auto ctx = f.ctx();
        CHECK(oracle.closeness(ctx, 0) == Catch::Approx(0.7));
    }

    SECTION("visible object at exactly 5 m scores 0") {
        Fixture f(grid, simple_episode(grid, center(grid, 24, 4), {center(grid, 4, 4), 0}));
        ScoreProvider oracle(ProviderKind::Oracle);
        auto ctx = f.ctx();
        REQUIRE(ctx.observation.find(0) != nullptr);
        CHECK(oracle.closeness(ctx, 0) == 0.0);
    }

    SECTION("occluded object at 1 m scores 0") {
        OccupancyGrid blocked = grid;
        blocked.set({7, 4}, Cell::Obstacle);
        Fixture f(blocked, simple_episode(blocked, center(blocked, 8, 4), {center(blocked, 4, 4), 0}));
        ScoreProvider oracle(ProviderKind::Oracle);
        auto ctx = f.ctx();
        CHECK(ctx.observation.find(0) == nullptr);
        CHECK(oracle.closeness(ctx, 0) == 0.0);
    }
}

TEST_CASE("oracle exploration scores per sector") {
    // Agent in a corridor junction fixture. One hidden object far to the
    // east; a frontier ahead leads toward it.
    OccupancyGrid grid(60, 21, 0.25);
    grid.close_boundary();
    Episode e = simple_episode(grid, center(grid, 50, 10), {center(grid, 10, 10), 0});
    EnvSim env(grid, e);
    Observation obs = env.sense();
    ScoreContext ctx{grid, env.fields(), env.state(), e, env.ids(), obs, 0, {}};
    ScoreProvider oracle(ProviderKind::Oracle);

    auto frontier_at = [&](int cx, int cy, int id) {
        Frontier f;
        f.id = id;
        f.anchor = {cx, cy};
        f.centroid = center(grid, cx, cy);
        f.cells = {grid.index({cx, cy}), grid.index({cx + 1, cy})};
        return f;
    };

    SECTION("no frontier in a sector scores 0") {
        const auto scores = oracle.exploration(ctx, {}, {0});
        CHECK(scores[0] == 0.0);
        CHECK(scores[1] == 0.0);
        CHECK(scores[2] == 0.0);
    }

    SECTION("a frontier 4 m closer to the hidden object scores 0.8") {
        // frontier dead ahead, 16 cells = 4 m closer to the object
        std::vector<Frontier> frontiers{frontier_at(26, 10, 0)};
        const auto scores = oracle.exploration(ctx, frontiers, {0});
        CHECK(scores[1] == Catch::Approx(0.8));
        CHECK(scores[0] == 0.0);
        CHECK(scores[2] == 0.0);
    }

    SECTION("a frontier farther from every object clamps to 0") {
        // object right next to the agent; the frontier ahead is much farther
        // from it, so (d_agent - d_frontier) is negative and clamps
        Episode near = simple_episode(grid, center(grid, 12, 10), {center(grid, 10, 10), 0});
        EnvSim env2(grid, near);
        Observation obs2 = env2.sense();
        ScoreContext ctx2{grid, env2.fields(), env2.state(), near, env2.ids(), obs2, 0, {}};
        std::vector<Frontier> ahead{frontier_at(40, 10, 1)};
        const auto scores = oracle.exploration(ctx2, ahead, {0});
        CHECK(scores[1] == 0.0);
    }

    SECTION("all objects discovered scores 0 everywhere") {
        std::vector<Frontier> frontiers{frontier_at(26, 10, 0)};
        const auto scores = oracle.exploration(ctx, frontiers, {});
        CHECK(scores == std::array<double, 3>{0.0, 0.0, 0.0});
    }

    SECTION("sector assignment follows the bearing") {
        CHECK(sector_of_bearing(0.0) == 1);
        CHECK(sector_of_bearing(-30.0) == 0);
        CHECK(sector_of_bearing(30.0) == 2);
        CHECK(sector_of_bearing(15.0) == 1);
        CHECK(sector_of_bearing(-15.0) == 1);
        CHECK(sector_of_bearing(45.0) == 2);
        CHECK(sector_of_bearing(-45.0) == 0);
        CHECK(sector_of_bearing(90.0) == -1);
    }
}

TEST_CASE("random provider: deterministic per (seed, t, slot) and uniform") {
    ScoreProvider a(ProviderKind::Random, 99);
    ScoreProvider b(ProviderKind::Random, 99);
    OccupancyGrid grid(8, 8, 0.25);
    grid.close_boundary();
    Fixture f(grid, simple_episode(grid, center(grid, 2, 2), {center(grid, 4, 4), 0}));
    auto ctx = f.ctx();

    CHECK(a.closeness(ctx, 0) == b.closeness(ctx, 0));
    CHECK(a.closeness(ctx, 1) != a.closeness(ctx, 0)); // different slot, different draw

    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += hashed_uniform(42, 0x1001u, static_cast<uint64_t>(i), 3u);
    CHECK(sum / n == Catch::Approx(0.5).margin(0.01));

    ScoreProvider zero(ProviderKind::Zero);
    CHECK(zero.closeness(ctx, 0) == 0.0);
}

TEST_CASE("provider kinds parse from config strings") {
    CHECK(provider_from_string("oracle") == ProviderKind::Oracle);
    CHECK(provider_from_string("random") == ProviderKind::Random);
    CHECK(provider_from_string("zero") == ProviderKind::Zero);
    CHECK_THROWS_AS(provider_from_string("cnn"), std::invalid_argument);
}
