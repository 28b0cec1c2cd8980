#pragma once

#include "longhot/geometry.hpp"
#include "longhot/grid.hpp"

#include <cmath>
#include <limits>

namespace longhot {

// Raster bounds + resolution, decoupled from cell contents so that both the
// ground-truth grid and an agent's belief map can drive the same traversal.
struct GridShape {
    int width = 0;
    int height = 0;
    double resolution = 0.25;

    bool in_bounds(const CellIndex& c) const {
        return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
    }
};

inline GridShape shape_of(const OccupancyGrid& grid) {
    return {grid.width(), grid.height(), grid.resolution()};
}

// Supercover traversal of the cells a directed ray passes through. When
// the ray crosses a lattice corner exactly, both side cells are visited
// before the diagonal one (conservative: a grazed corner counts as
// touched). The visitor receives (cell, entry_t) where entry_t is the ray
// parameter at which the cell is entered, in units of |(dir_x, dir_y)|;
// pass a unit direction to get meters. Returning false stops the walk.
template <typename Visitor>
void walk_cells(const GridShape& shape, const Point& from, double dir_x, double dir_y,
                double max_dist, Visitor&& visit) {
    const double res = shape.resolution;
    CellIndex c = cell_of(from, res);
    if (!shape.in_bounds(c) || !visit(c, 0.0)) return;

    const int step_x = dir_x > 0 ? 1 : (dir_x < 0 ? -1 : 0);
    const int step_y = dir_y > 0 ? 1 : (dir_y < 0 ? -1 : 0);
    if (step_x == 0 && step_y == 0) return;

    const double inf = std::numeric_limits<double>::infinity();
    // Distance along the ray to the next vertical / horizontal cell boundary.
    auto boundary_t = [&](double coord, int cell_coord, double d, int step) {
        if (step == 0) return inf;
        const double edge = (step > 0 ? (cell_coord + 1) : cell_coord) * res;
        return (edge - coord) / d;
    };
    double t_max_x = boundary_t(from.x, c.x, dir_x, step_x);
    double t_max_y = boundary_t(from.y, c.y, dir_y, step_y);
    const double t_delta_x = step_x != 0 ? res / std::abs(dir_x) : inf;
    const double t_delta_y = step_y != 0 ? res / std::abs(dir_y) : inf;

    while (true) {
        if (t_max_x < t_max_y) {
            const double t = t_max_x;
            if (t > max_dist) return;
            c.x += step_x;
            t_max_x += t_delta_x;
            if (!shape.in_bounds(c) || !visit(c, t)) return;
        } else if (t_max_y < t_max_x) {
            const double t = t_max_y;
            if (t > max_dist) return;
            c.y += step_y;
            t_max_y += t_delta_y;
            if (!shape.in_bounds(c) || !visit(c, t)) return;
        } else {
            // Exact corner crossing: touch both side cells, then continue
            // from the diagonal cell.
            const double t = t_max_x;
            if (t > max_dist || t == inf) return;
            const CellIndex side_x{c.x + step_x, c.y};
            const CellIndex side_y{c.x, c.y + step_y};
            if (shape.in_bounds(side_x) && !visit(side_x, t)) return;
            if (shape.in_bounds(side_y) && !visit(side_y, t)) return;
            c.x += step_x;
            c.y += step_y;
            t_max_x += t_delta_x;
            t_max_y += t_delta_y;
            if (!shape.in_bounds(c) || !visit(c, t)) return;
        }
    }
}

// True iff the segment a->b crosses no obstacle cell.
inline bool line_of_sight(const OccupancyGrid& grid, const Point& a, const Point& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    bool clear = true;
    auto check = [&](const CellIndex& c, double) {
        if (grid.at(c) == Cell::Obstacle) {
            clear = false;
            return false;
        }
        return true;
    };
    if (dx == 0.0 && dy == 0.0) {
        const CellIndex c = grid.cell_of_point(a);
        return grid.in_bounds(c) && grid.at(c) != Cell::Obstacle;
    }
    walk_cells(shape_of(grid), a, dx, dy, 1.0, check); // parameter runs 0..1
    return clear;
}

struct RayHit {
    double range = 0.0;   // meters to the obstacle's entry point, or the clip range
    bool hit = false;
    CellIndex cell{-1, -1}; // the struck obstacle cell, when hit
};

// March a ray until the first obstacle cell or max_range. The entry
// parameter and struck cell are exact, so a belief-map pass replaying the
// same walk classifies every traversed cell identically.
inline RayHit raycast(const OccupancyGrid& grid, const Point& origin, int angle_deg, double max_range) {
    const double dx = cos_deg(angle_deg);
    const double dy = sin_deg(angle_deg);
    RayHit result{max_range, false, {-1, -1}};
    walk_cells(shape_of(grid), origin, dx, dy, max_range, [&](const CellIndex& c, double t) {
        if (grid.at(c) == Cell::Obstacle) {
            result = {t, true, c};
            return false;
        }
        return true;
    });
    return result;
}

} // namespace longhot
