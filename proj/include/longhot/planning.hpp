#pragma once

#include "longhot/cost.hpp"
#include "longhot/mapping.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <vector>

namespace longhot {

struct PlannedPath {
    std::vector<CellIndex> cells; // from -> to inclusive
    StepCost cost;
};

namespace detail {

inline bool belief_diagonal_allowed(const ExploredMap& map, const CellIndex& from, int dx, int dy) {
    return map.traversable({from.x + dx, from.y}) && map.traversable({from.x, from.y + dy});
}

// octile lower bound: exact move counts assuming all-free cells
inline StepCost octile(const CellIndex& a, const CellIndex& b) {
    const uint32_t adx = static_cast<uint32_t>(std::abs(a.x - b.x));
    const uint32_t ady = static_cast<uint32_t>(std::abs(a.y - b.y));
    const uint32_t diag = std::min(adx, ady);
    return {std::max(adx, ady) - diag, diag};
}

} // namespace detail

// A* over the belief map: known-free cells cost 1x, unknown cells are
// optimistically traversable at 2x, obstacles are blocked. Exact move-count
// arithmetic keeps the result identical to any exact shortest-path search.
inline std::optional<PlannedPath> astar(const ExploredMap& map, const CellIndex& from,
                                        const CellIndex& to) {
    if (!map.traversable(from) || !map.traversable(to)) return std::nullopt;
    if (from == to) return PlannedPath{{from}, {0, 0}};

    const int n = map.cell_count();
    std::vector<StepCost> g(static_cast<size_t>(n), StepCost::unreachable());
    std::vector<int> parent(static_cast<size_t>(n), -1);

    struct Entry {
        StepCost f;
        StepCost h;
        int idx;
    };
    auto worse = [](const Entry& a, const Entry& b) {
        if (step_cost_less(b.f, a.f)) return true;
        if (step_cost_less(a.f, b.f)) return false;
        if (step_cost_less(b.h, a.h)) return true;
        if (step_cost_less(a.h, b.h)) return false;
        return a.idx > b.idx;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

    const int start = map.index(from);
    g[static_cast<size_t>(start)] = {0, 0};
    open.push({detail::octile(from, to), detail::octile(from, to), start});

    while (!open.empty()) {
        const Entry top = open.top();
        open.pop();
        const CellIndex c = map.cell_at(top.idx);
        const StepCost gc = g[static_cast<size_t>(top.idx)];
        if (step_cost_less(gc + top.h, top.f)) continue; // stale
        if (top.idx == map.index(to)) {
            PlannedPath path;
            path.cost = gc;
            for (int idx = top.idx; idx != -1; idx = parent[static_cast<size_t>(idx)])
                path.cells.push_back(map.cell_at(idx));
            std::reverse(path.cells.begin(), path.cells.end());
            return path;
        }
        for (const auto& m : kGridMoves) {
            const CellIndex nb{c.x + m.dx, c.y + m.dy};
            if (!map.traversable(nb)) continue;
            if (m.diagonal && !detail::belief_diagonal_allowed(map, c, m.dx, m.dy)) continue;
            const uint32_t mult = map.at(nb) == Explored::Unknown ? 2u : 1u;
            const StepCost step{m.diagonal ? 0u : mult, m.diagonal ? mult : 0u};
            const StepCost cand = gc + step;
            StepCost& slot = g[static_cast<size_t>(map.index(nb))];
            if (step_cost_less(cand, slot)) {
                slot = cand;
                parent[static_cast<size_t>(map.index(nb))] = top.idx;
                const StepCost h = detail::octile(nb, to);
                open.push({cand + h, h, map.index(nb)});
            }
        }
    }
    return std::nullopt;
}

// Full Dijkstra over the belief map from one source; unknown cells are
// traversable at the given multiplier. Used for greedy descent toward a
// believed target and for ranking frontiers by travel cost.
class BeliefField {
public:
    BeliefField(const ExploredMap& map, const CellIndex& source, uint32_t unknown_mult = 1)
        : width_(map.width()), resolution_(map.resolution()),
          steps_(static_cast<size_t>(map.cell_count()), StepCost::unreachable()) {
        if (!map.traversable(source)) return;

        using Entry = std::pair<StepCost, int>;
        auto greater = [](const Entry& a, const Entry& b) { return step_cost_less(b.first, a.first); };
        std::priority_queue<Entry, std::vector<Entry>, decltype(greater)> open(greater);
        steps_[static_cast<size_t>(map.index(source))] = {0, 0};
        open.push({{0, 0}, map.index(source)});

        while (!open.empty()) {
            auto [cost, idx] = open.top();
            open.pop();
            if (step_cost_less(steps_[static_cast<size_t>(idx)], cost)) continue;
            const CellIndex c = map.cell_at(idx);
            for (const auto& m : kGridMoves) {
                const CellIndex nb{c.x + m.dx, c.y + m.dy};
                if (!map.traversable(nb)) continue;
                if (m.diagonal && !detail::belief_diagonal_allowed(map, c, m.dx, m.dy)) continue;
                const uint32_t mult = map.at(nb) == Explored::Unknown ? unknown_mult : 1u;
                const StepCost step{m.diagonal ? 0u : mult, m.diagonal ? mult : 0u};
                const StepCost cand = cost + step;
                StepCost& slot = steps_[static_cast<size_t>(map.index(nb))];
                if (step_cost_less(cand, slot)) {
                    slot = cand;
                    open.push({cand, map.index(nb)});
                }
            }
        }
    }

    StepCost steps_at(const CellIndex& c) const {
        const int idx = c.y * width_ + c.x;
        if (c.x < 0 || c.y < 0 || c.x >= width_ || static_cast<size_t>(idx) >= steps_.size())
            return StepCost::unreachable();
        return steps_[static_cast<size_t>(idx)];
    }

    double meters_at(const CellIndex& c) const { return steps_at(c).meters(resolution_); }
    bool reachable(const CellIndex& c) const { return !steps_at(c).is_unreachable(); }

private:
    int width_;
    double resolution_;
    std::vector<StepCost> steps_;
};

} // namespace longhot
