#include "longhot/distance.hpp"
#include "longhot/grid.hpp"
#include "longhot/scene_gen.hpp"
#include "longhot/scene_io.hpp"
#include "longhot/visibility.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace longhot;
using longhot::test::center;
using longhot::test::grid_from_ascii;

namespace {

OccupancyGrid random_grid(Rng& rng, int side, double obstacle_p) {
    OccupancyGrid grid(side, side, 0.25);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
            if (rng.next_double() < obstacle_p) grid.set({x, y}, Cell::Obstacle);
    return grid;
}

} // namespace

TEST_CASE("scene generation: determinism, size, connectivity") {
    SceneSpec spec;
    spec.extent_m = 30.0;
    spec.room_count = 6;
    const OccupancyGrid a = generate_scene(7, spec);
    const OccupancyGrid b = generate_scene(7, spec);

    CHECK(a.width() == 120);
    CHECK(a.height() == 120);
    CHECK(a.boundary_closed());
    CHECK(free_region_connected(a));
    CHECK(a.cells() == b.cells());
    CHECK_FALSE(a.is_large());

    SceneSpec large = spec;
    large.extent_m = 48.0;
    const OccupancyGrid c = generate_scene(3, large);
    CHECK(c.is_large());
    CHECK(free_region_connected(c));

    SceneSpec bad = spec;
    bad.extent_m = 5.0;
    CHECK_THROWS_AS(generate_scene(1, bad), GenerationFailed);
}

TEST_CASE("scene file round-trip is bit-exact") {
    SceneSpec spec;
    spec.extent_m = 12.0;
    spec.room_count = 3;
    Scene scene{"scene_007", generate_scene(7, spec)};

    const std::string text = scene_to_json(scene);
    const Scene loaded = scene_from_json(text);
    CHECK(loaded.id == scene.id);
    CHECK(loaded.grid == scene.grid);
    CHECK(scene_to_json(loaded) == text);

    CHECK_THROWS_AS(scene_from_json("{\"format\":\"other\"}"), InvalidScene);
    CHECK_THROWS_AS(decode_cells_rle("3.x", 4), InvalidScene);
    CHECK_THROWS_AS(decode_cells_rle("3.", 4), InvalidScene);
}

TEST_CASE("geodesic field: corner-to-corner and trivial cases") {
    OccupancyGrid grid(5, 5, 0.25); // all free
    const Point corner = center(grid, 0, 0);
    const Point opposite = center(grid, 4, 4);
    const DistanceField field = geodesic_field(grid, corner);

    CHECK(field.steps_at({4, 4}) == StepCost{0, 4});
    CHECK(field.meters_at(opposite) == Catch::Approx(4 * 0.25 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(field.meters_at(corner) == 0.0);

    OccupancyGrid blocked(5, 5, 0.25);
    blocked.set({2, 2}, Cell::Obstacle);
    CHECK_THROWS_AS(geodesic_field(blocked, center(blocked, 2, 2)), InvalidSource);
}

TEST_CASE("geodesic around a U-shaped wall matches the brute-force oracle") {
    const OccupancyGrid grid = grid_from_ascii({
        "..........",
        "..........",
        "..#..#....",
        "..#..#....",
        "..####....",
        "..........",
        "..........",
    });
    const Point a = center(grid, 3, 3); // inside the U
    const Point b = center(grid, 7, 3); // outside, 1 m away
    const DistanceField field = geodesic_field(grid, a);
    const auto oracle = oracle::brute_force_dijkstra(grid, grid.cell_of_point(a));

    for (int i = 0; i < grid.cell_count(); ++i) {
        const CellIndex c = grid.cell_at(i);
        CHECK(field.meters_at(c) == oracle::move_count_meters(oracle[static_cast<size_t>(i)], 0.25));
    }
    CHECK(field.meters_at(b) > euclidean(a, b));
    CHECK(geodesic(grid, a, b) == geodesic(grid, b, a));
}

TEST_CASE("geodesic field equals independent Dijkstra on 500 random grids, exactly") {
    Rng rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const OccupancyGrid grid = random_grid(rng, 16, 0.30);
        auto free_cells = grid.free_cell_indices();
        if (free_cells.empty()) continue;
        const CellIndex src = grid.cell_at(free_cells[rng.next_below(free_cells.size())]);
        const DistanceField field = geodesic_field(grid, grid.center_of(src));
        const auto oracle = oracle::brute_force_dijkstra(grid, src);
        for (int i = 0; i < grid.cell_count(); ++i) {
            const double expected = oracle::move_count_meters(oracle[static_cast<size_t>(i)], 0.25);
            const double got = field.meters_at(grid.cell_at(i));
            if (got != expected) {
                CAPTURE(trial, i);
                REQUIRE(got == expected);
            }
        }
    }
    SUCCEED();
}

TEST_CASE("geodesic dominates Euclidean between cell centers") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const OccupancyGrid grid = random_grid(rng, 20, 0.2);
        auto free_cells = grid.free_cell_indices();
        if (free_cells.size() < 2) continue;
        const CellIndex a = grid.cell_at(free_cells[rng.next_below(free_cells.size())]);
        const DistanceField field = geodesic_field(grid, grid.center_of(a));
        for (int k = 0; k < 50; ++k) {
            const CellIndex b = grid.cell_at(free_cells[rng.next_below(free_cells.size())]);
            const double g = field.meters_at(b);
            if (std::isinf(g)) continue;
            CHECK(g >= euclidean(grid.center_of(a), grid.center_of(b)) - 1e-9);
        }
    }
}

TEST_CASE("unreachable pairs report infinity") {
    const OccupancyGrid grid = grid_from_ascii({
        "...#...",
        "...#...",
        "...#...",
    });
    CHECK(std::isinf(geodesic(grid, center(grid, 0, 1), center(grid, 6, 1))));
    CHECK(std::isinf(geodesic(grid, center(grid, 0, 1), center(grid, 3, 1)))); // target on obstacle
}

TEST_CASE("line of sight: trivial and occluded cases") {
    const OccupancyGrid grid = grid_from_ascii({
        ".......",
        "...#...",
        ".......",
    });
    CHECK(line_of_sight(grid, center(grid, 0, 0), center(grid, 1, 0)));
    CHECK(line_of_sight(grid, center(grid, 0, 0), center(grid, 0, 0)));
    CHECK_FALSE(line_of_sight(grid, center(grid, 1, 1), center(grid, 5, 1))); // through the block

    const OccupancyGrid wall = grid_from_ascii({
        "...#...",
        "...#...",
        "...#...",
    });
    CHECK_FALSE(line_of_sight(wall, center(wall, 1, 1), center(wall, 5, 1)));
}

TEST_CASE("line of sight treats a grazed obstacle corner as blocked") {
    // Segment along the 45-degree diagonal through exact lattice corners.
    OccupancyGrid grid(4, 4, 0.25);
    grid.set({1, 1}, Cell::Obstacle);
    const Point a{0.125, 0.125};
    const Point b{0.625, 0.625};
    CHECK_FALSE(line_of_sight(grid, a, b));
    CHECK_FALSE(oracle::line_of_sight_exhaustive(grid, a, b));

    // Same geometry, obstacle only touching the segment at one corner point.
    OccupancyGrid graze(4, 4, 0.25);
    graze.set({1, 0}, Cell::Obstacle);
    CHECK_FALSE(line_of_sight(graze, a, b));
    CHECK_FALSE(oracle::line_of_sight_exhaustive(graze, a, b));

    OccupancyGrid open(4, 4, 0.25);
    CHECK(line_of_sight(open, a, b));
    CHECK(oracle::line_of_sight_exhaustive(open, a, b));
}

TEST_CASE("line of sight agrees with exhaustive cell intersection on random segments") {
    Rng rng(7);
    int blocked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const OccupancyGrid grid = random_grid(rng, 14, 0.18);
        for (int k = 0; k < 60; ++k) {
            Point a{rng.next_double(0.01, grid.extent_x() - 0.01),
                    rng.next_double(0.01, grid.extent_y() - 0.01)};
            Point b{rng.next_double(0.01, grid.extent_x() - 0.01),
                    rng.next_double(0.01, grid.extent_y() - 0.01)};
            if (grid.at(grid.cell_of_point(a)) == Cell::Obstacle) continue;
            const bool fast = line_of_sight(grid, a, b);
            const bool slow = oracle::line_of_sight_exhaustive(grid, a, b);
            if (fast != slow) {
                CAPTURE(trial, k, a.x, a.y, b.x, b.y);
                REQUIRE(fast == slow);
            }
            blocked += fast ? 0 : 1;
        }
    }
    CHECK(blocked > 100); // the sample actually exercises occlusion
}

TEST_CASE("raycast reports the entry distance of the first obstacle") {
    const OccupancyGrid grid = grid_from_ascii({
        ".......",
        ".....#.",
        ".......",
    });
    const Point origin = center(grid, 0, 1);
    const RayHit hit = raycast(grid, origin, 0, 5.0);
    CHECK(hit.hit);
    // obstacle cell starts at x = 5*0.25; origin x = 0.125
    CHECK(hit.range == Catch::Approx(5 * 0.25 - 0.125).epsilon(1e-12));

    const RayHit miss = raycast(grid, origin, 180, 5.0);
    CHECK_FALSE(miss.hit);
    CHECK(miss.range == 5.0);
}
