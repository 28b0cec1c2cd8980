#pragma once

// Independent reference implementations used only by tests. These stay
// deliberately separate from the library code paths they validate.

#include "longhot/cost.hpp"
#include "longhot/geometry.hpp"
#include "longhot/grid.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace longhot::oracle {

// --- Brute-force geodesics -------------------------------------------------
//
// Label-correcting relaxation (Bellman-Ford style) over (straight, diagonal)
// move counts, iterated to fixpoint. The ordering predicate is re-derived
// here from scratch: compare u + v*sqrt(2) by sign analysis on integers.

struct MoveCount {
    int64_t straight;
    int64_t diagonal;
};

inline bool move_count_less(const MoveCount& a, const MoveCount& b) {
    const int64_t u = a.straight - b.straight;
    const int64_t v = a.diagonal - b.diagonal;
    if (u == 0) return v < 0;
    if (v == 0) return u < 0;
    if (u < 0 && v < 0) return true;
    if (u > 0 && v > 0) return false;
    const int64_t uu = u * u;
    const int64_t vv2 = 2 * v * v;
    if (u < 0) return uu > vv2; // -|u| + v*sqrt2 < 0  iff  u^2 > 2v^2
    return uu < vv2;            //  u - |v|*sqrt2 < 0  iff  u^2 < 2v^2
}

inline std::vector<MoveCount> brute_force_dijkstra(const OccupancyGrid& grid, const CellIndex& source) {
    const MoveCount inf{INT64_MAX, INT64_MAX};
    std::vector<MoveCount> dist(static_cast<size_t>(grid.cell_count()), inf);
    dist[static_cast<size_t>(grid.index(source))] = {0, 0};

    const int off_x[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int off_y[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    bool changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < grid.height(); ++y) {
            for (int x = 0; x < grid.width(); ++x) {
                const CellIndex c{x, y};
                const MoveCount& dc = dist[static_cast<size_t>(grid.index(c))];
                if (dc.straight == INT64_MAX || !grid.is_free(c)) continue;
                for (int k = 0; k < 8; ++k) {
                    const CellIndex n{x + off_x[k], y + off_y[k]};
                    if (!grid.is_free(n)) continue;
                    const bool diag = off_x[k] != 0 && off_y[k] != 0;
                    if (diag && (!grid.is_free({x + off_x[k], y}) || !grid.is_free({x, y + off_y[k]})))
                        continue;
                    const MoveCount cand{dc.straight + (diag ? 0 : 1), dc.diagonal + (diag ? 1 : 0)};
                    MoveCount& dn = dist[static_cast<size_t>(grid.index(n))];
                    if (dn.straight == INT64_MAX || move_count_less(cand, dn)) {
                        dn = cand;
                        changed = true;
                    }
                }
            }
        }
    }
    return dist;
}

inline double move_count_meters(const MoveCount& m, double resolution) {
    if (m.straight == INT64_MAX) return std::numeric_limits<double>::infinity();
    return static_cast<double>(m.straight) * resolution +
           static_cast<double>(m.diagonal) * (resolution * std::sqrt(2.0));
}

// --- Segment / cell intersection -------------------------------------------
//
// Closed-set slab test: does the segment a->b touch the closed square of
// the given cell (corner contact counts)?

inline bool segment_touches_cell(const Point& a, const Point& b, const CellIndex& cell, double res) {
    const double lo_x = cell.x * res, hi_x = (cell.x + 1) * res;
    const double lo_y = cell.y * res, hi_y = (cell.y + 1) * res;
    const double dx = b.x - a.x, dy = b.y - a.y;
    double t0 = 0.0, t1 = 1.0;

    if (dx == 0.0) {
        if (a.x < lo_x || a.x > hi_x) return false;
    } else {
        double u = (lo_x - a.x) / dx, v = (hi_x - a.x) / dx;
        if (u > v) std::swap(u, v);
        t0 = std::max(t0, u);
        t1 = std::min(t1, v);
    }
    if (dy == 0.0) {
        if (a.y < lo_y || a.y > hi_y) return false;
    } else {
        double u = (lo_y - a.y) / dy, v = (hi_y - a.y) / dy;
        if (u > v) std::swap(u, v);
        t0 = std::max(t0, u);
        t1 = std::min(t1, v);
    }
    return t0 <= t1;
}

// --- Frontier classification -------------------------------------------------
//
// Independent frontier finder: classify every cell by definition, then
// cluster with union-find over 8-neighborhoods. Returns sorted clusters of
// sorted cell indices, smallest-first-cell order, singletons dropped.

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) {
        for (size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int a) { return parent[static_cast<size_t>(a)] == a ? a : parent[static_cast<size_t>(a)] = find(parent[static_cast<size_t>(a)]); }
    void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

// states: 0 unknown, 1 free, 2 obstacle, row-major.
inline std::vector<std::vector<int>> brute_force_frontier_clusters(const std::vector<uint8_t>& states,
                                                                   int w, int h, size_t min_size) {
    auto at = [&](int x, int y) -> uint8_t {
        if (x < 0 || y < 0 || x >= w || y >= h) return 2;
        return states[static_cast<size_t>(y * w + x)];
    };
    std::vector<uint8_t> frontier(static_cast<size_t>(w) * h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (at(x, y) != 1) continue;
            const bool unknown_nb = (x + 1 < w && at(x + 1, y) == 0) || (x > 0 && at(x - 1, y) == 0) ||
                                    (y + 1 < h && at(x, y + 1) == 0) || (y > 0 && at(x, y - 1) == 0);
            if (unknown_nb) frontier[static_cast<size_t>(y * w + x)] = 1;
        }

    UnionFind uf(static_cast<size_t>(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!frontier[static_cast<size_t>(y * w + x)]) continue;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    if (frontier[static_cast<size_t>(ny * w + nx)])
                        uf.unite(y * w + x, ny * w + nx);
                }
        }

    std::vector<std::vector<int>> by_root(static_cast<size_t>(w) * h);
    for (int i = 0; i < w * h; ++i)
        if (frontier[static_cast<size_t>(i)]) by_root[static_cast<size_t>(uf.find(i))].push_back(i);

    std::vector<std::vector<int>> clusters;
    for (auto& c : by_root) {
        if (c.size() < min_size) continue;
        std::sort(c.begin(), c.end());
        clusters.push_back(std::move(c));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return clusters;
}

// --- Reference tour ----------------------------------------------------------
//
// Independent greedy-chain tour length: start -> container -> repeatedly the
// nearest unvisited object -> goal, with distances taken from brute-force
// relaxation fields rather than the library's Dijkstra.

inline double greedy_reference_tour(const OccupancyGrid& grid, const Point& start,
                                    const Point& container, std::vector<Point> objects,
                                    const Point& goal) {
    const auto distance = [&](const Point& from, const Point& to) {
        const auto field = brute_force_dijkstra(grid, grid.cell_of_point(from));
        return move_count_meters(field[static_cast<size_t>(grid.index(grid.cell_of_point(to)))],
                                 grid.resolution());
    };
    double total = distance(start, container);
    Point at = container;
    std::vector<bool> used(objects.size(), false);
    for (size_t round = 0; round < objects.size(); ++round) {
        int best = -1;
        double best_d = 0.0;
        for (size_t i = 0; i < objects.size(); ++i) {
            if (used[i]) continue;
            const double d = distance(at, objects[i]);
            if (best < 0 || d < best_d) {
                best = static_cast<int>(i);
                best_d = d;
            }
        }
        used[static_cast<size_t>(best)] = true;
        total += best_d;
        at = objects[static_cast<size_t>(best)];
    }
    total += distance(at, goal);
    return total;
}

// Exhaustive line-of-sight: scan every cell in the segment's bounding box.
inline bool line_of_sight_exhaustive(const OccupancyGrid& grid, const Point& a, const Point& b) {
    const double res = grid.resolution();
    const CellIndex ca = grid.cell_of_point(a);
    const CellIndex cb = grid.cell_of_point(b);
    const int x0 = std::max(0, std::min(ca.x, cb.x) - 1);
    const int x1 = std::min(grid.width() - 1, std::max(ca.x, cb.x) + 1);
    const int y0 = std::max(0, std::min(ca.y, cb.y) - 1);
    const int y1 = std::min(grid.height() - 1, std::max(ca.y, cb.y) + 1);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const CellIndex c{x, y};
            if (grid.at(c) == Cell::Obstacle && segment_touches_cell(a, b, c, res)) return false;
        }
    return true;
}

} // namespace longhot::oracle
