#pragma once

#include "longhot/cost.hpp"
#include "longhot/grid.hpp"

#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace longhot {

struct InvalidSource : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

// Neighbor offsets in a fixed order: orthogonal first, then diagonal.
struct GridMove {
    int dx, dy;
    bool diagonal;
};

inline constexpr std::array<GridMove, 8> kGridMoves = {{
    {1, 0, false}, {-1, 0, false}, {0, 1, false}, {0, -1, false},
    {1, 1, true}, {1, -1, true}, {-1, 1, true}, {-1, -1, true},
}};

// Exact geodesic distances from one source cell to every free cell,
// 8-connected, straight cost = resolution, diagonal = resolution*sqrt(2).
// Immutable after construction.
class DistanceField {
public:
    DistanceField(const OccupancyGrid& grid, const Point& source)
        : resolution_(grid.resolution()), width_(grid.width()), source_(source) {
        const CellIndex src = grid.cell_of_point(source);
        if (!grid.is_free(src)) throw InvalidSource("distance field source is not a free cell");
        steps_.assign(static_cast<size_t>(grid.cell_count()), StepCost::unreachable());

        using Entry = std::pair<StepCost, int>;
        auto greater = [](const Entry& a, const Entry& b) { return step_cost_less(b.first, a.first); };
        std::priority_queue<Entry, std::vector<Entry>, decltype(greater)> open(greater);

        steps_[static_cast<size_t>(grid.index(src))] = {0, 0};
        open.push({{0, 0}, grid.index(src)});
        while (!open.empty()) {
            auto [cost, idx] = open.top();
            open.pop();
            if (step_cost_less(steps_[static_cast<size_t>(idx)], cost)) continue; // stale entry
            const CellIndex c = grid.cell_at(idx);
            for (const auto& m : kGridMoves) {
                const CellIndex n{c.x + m.dx, c.y + m.dy};
                if (!grid.is_free(n)) continue;
                if (m.diagonal && !diagonal_allowed(grid, c, m.dx, m.dy)) continue;
                const StepCost next = cost + StepCost{m.diagonal ? 0u : 1u, m.diagonal ? 1u : 0u};
                StepCost& slot = steps_[static_cast<size_t>(grid.index(n))];
                if (step_cost_less(next, slot)) {
                    slot = next;
                    open.push({next, grid.index(n)});
                }
            }
        }
    }

    const Point& source() const { return source_; }

    StepCost steps_at(const CellIndex& c) const {
        if (c.x < 0 || c.y < 0 || c.x >= width_ || static_cast<size_t>(c.y * width_ + c.x) >= steps_.size())
            return StepCost::unreachable();
        return steps_[static_cast<size_t>(c.y * width_ + c.x)];
    }

    double meters_at(const CellIndex& c) const { return steps_at(c).meters(resolution_); }
    double meters_at(const Point& p) const { return meters_at(cell_of(p, resolution_)); }

    bool reachable(const Point& p) const { return !steps_at(cell_of(p, resolution_)).is_unreachable(); }

private:
    double resolution_;
    int width_;
    Point source_;
    std::vector<StepCost> steps_;
};

inline DistanceField geodesic_field(const OccupancyGrid& grid, const Point& source) {
    return DistanceField(grid, source);
}

// Convenience pairwise geodesic; infinity when unreachable.
inline double geodesic(const OccupancyGrid& grid, const Point& a, const Point& b) {
    if (!grid.point_free(a) || !grid.point_free(b)) return kInfiniteDistance;
    return DistanceField(grid, a).meters_at(b);
}

// Flood count of free cells reachable from a source, under the same move
// rules as the distance field.
inline int reachable_free_cells(const OccupancyGrid& grid, const CellIndex& source) {
    if (!grid.is_free(source)) return 0;
    std::vector<uint8_t> seen(static_cast<size_t>(grid.cell_count()), 0);
    std::vector<CellIndex> stack{source};
    seen[static_cast<size_t>(grid.index(source))] = 1;
    int count = 0;
    while (!stack.empty()) {
        const CellIndex c = stack.back();
        stack.pop_back();
        ++count;
        for (const auto& m : kGridMoves) {
            const CellIndex n{c.x + m.dx, c.y + m.dy};
            if (!grid.is_free(n)) continue;
            if (m.diagonal && !diagonal_allowed(grid, c, m.dx, m.dy)) continue;
            uint8_t& flag = seen[static_cast<size_t>(grid.index(n))];
            if (!flag) {
                flag = 1;
                stack.push_back(n);
            }
        }
    }
    return count;
}

// True when every free cell belongs to one connected component.
inline bool free_region_connected(const OccupancyGrid& grid) {
    int first_free = -1;
    int total_free = 0;
    for (int i = 0; i < grid.cell_count(); ++i) {
        if (grid.cells()[static_cast<size_t>(i)] == Cell::Free) {
            if (first_free < 0) first_free = i;
            ++total_free;
        }
    }
    if (total_free == 0) return false;
    return reachable_free_cells(grid, grid.cell_at(first_free)) == total_free;
}

} // namespace longhot
