#pragma once

#include "longhot/env.hpp"
#include "longhot/geometry.hpp"
#include "longhot/visibility.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace longhot {

enum class Explored : uint8_t { Unknown = 0, Free = 1, Obstacle = 2 };

// Agent-side occupancy belief, updated only from depth observations.
// Sensing is exact, so cells never change class once known.
class ExploredMap {
public:
    ExploredMap() = default;
    explicit ExploredMap(GridShape shape)
        : shape_(shape),
          cells_(static_cast<size_t>(shape.width) * shape.height, Explored::Unknown),
          unknown_(shape.width * shape.height) {}

    const GridShape& shape() const { return shape_; }
    int width() const { return shape_.width; }
    int height() const { return shape_.height; }
    double resolution() const { return shape_.resolution; }
    int cell_count() const { return shape_.width * shape_.height; }
    int unknown_count() const { return unknown_; }

    int index(const CellIndex& c) const { return c.y * shape_.width + c.x; }
    CellIndex cell_at(int index) const { return {index % shape_.width, index / shape_.width}; }
    bool in_bounds(const CellIndex& c) const { return shape_.in_bounds(c); }

    Explored at(const CellIndex& c) const { return cells_[static_cast<size_t>(index(c))]; }
    bool known_free(const CellIndex& c) const { return in_bounds(c) && at(c) == Explored::Free; }
    bool traversable(const CellIndex& c) const {
        return in_bounds(c) && at(c) != Explored::Obstacle; // unknown is optimistic
    }

    void mark(const CellIndex& c, Explored value) {
        Explored& cell = cells_[static_cast<size_t>(index(c))];
        if (cell == value) return;
        if (cell != Explored::Unknown)
            throw std::logic_error("explored map: contradictory observation");
        cell = value;
        --unknown_;
    }

    const std::vector<Explored>& cells() const { return cells_; }

private:
    GridShape shape_;
    std::vector<Explored> cells_;
    int unknown_ = 0;
};

// Per-direction storage attached to a graph node: one exploration score,
// one closeness score per object, and bookkeeping for recency tie-breaks.
struct DirectionSlot {
    double exploration_score = 0.0;
    std::vector<double> closeness; // indexed by object id (targets, container, goal)
    bool feature_present = false;
    int last_update_t = -1;
};

struct TopoNode {
    int id = 0;
    Point position;
    int last_visit_t = -1;
    std::array<DirectionSlot, kDirections> slots;
};

struct SlotRef {
    int node = -1;
    int direction = -1;
    friend bool operator==(const SlotRef&, const SlotRef&) = default;
    friend auto operator<=>(const SlotRef&, const SlotRef&) = default;
};

// Sparse topological map: nodes are dropped along the trajectory at a
// minimum spacing, edges record consecutive visits.
class TopoGraph {
public:
    TopoGraph(int object_count = 0, double node_spacing_m = 2.0)
        : object_count_(object_count), spacing_(node_spacing_m) {}

    int size() const { return static_cast<int>(nodes_.size()); }
    const TopoNode& node(int id) const { return nodes_[static_cast<size_t>(id)]; }
    TopoNode& node(int id) { return nodes_[static_cast<size_t>(id)]; }
    const std::vector<TopoNode>& nodes() const { return nodes_; }
    const std::set<std::pair<int, int>>& edges() const { return edges_; }
    double node_spacing() const { return spacing_; }
    int object_count() const { return object_count_; }

    std::optional<std::pair<int, double>> nearest_node(const Point& p) const {
        int best = -1;
        double best_d = 0.0;
        for (const auto& n : nodes_) {
            const double d = euclidean(n.position, p);
            if (best < 0 || d < best_d) {
                best = n.id;
                best_d = d;
            }
        }
        if (best < 0) return std::nullopt;
        return std::make_pair(best, best_d);
    }

    // Localize to the nearest node within the spacing threshold, creating a
    // new node otherwise.
    int localize_or_insert(const Point& p, int t) {
        const auto nearest = nearest_node(p);
        int id;
        if (nearest && nearest->second < spacing_) {
            id = nearest->first;
        } else {
            id = size();
            TopoNode n;
            n.id = id;
            n.position = p;
            for (auto& slot : n.slots) slot.closeness.assign(static_cast<size_t>(object_count_), 0.0);
            nodes_.push_back(std::move(n));
        }
        nodes_[static_cast<size_t>(id)].last_visit_t = t;
        return id;
    }

    void add_edge(int a, int b) {
        if (a == b) return;
        edges_.insert({std::min(a, b), std::max(a, b)});
    }

    // Highest stored closeness for one object over every node-direction.
    struct BestSlot {
        double score = 0.0;
        SlotRef slot;
        int last_update_t = -1;
    };

    BestSlot best_closeness(int object_id) const {
        BestSlot best;
        for (const auto& n : nodes_)
            for (int d = 0; d < kDirections; ++d) {
                const auto& slot = n.slots[static_cast<size_t>(d)];
                const double score = slot.closeness[static_cast<size_t>(object_id)];
                if (score <= 0.0) continue;
                bool better = best.slot.node < 0;
                if (!better && score != best.score) better = score > best.score;
                else if (!better && slot.last_update_t != best.last_update_t)
                    better = slot.last_update_t > best.last_update_t;
                // remaining ties fall through to the earlier (lower) node id
                if (better) best = {score, {n.id, d}, slot.last_update_t};
            }
        return best;
    }

private:
    int object_count_;
    double spacing_;
    std::vector<TopoNode> nodes_;
    std::set<std::pair<int, int>> edges_;
};

// Scores from one vantage point are written to the three directions covered
// by the field of view, wrapping around the 12-slot ring.
inline void store_scores(TopoGraph& graph, int node_id, int direction,
                         const std::array<double, 3>& exploration_scores,
                         const std::vector<double>& closeness, int t) {
    for (double s : exploration_scores)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw std::invalid_argument("exploration scores must be finite and >= 0");
    for (double s : closeness)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw std::invalid_argument("closeness scores must be finite and >= 0");

    TopoNode& node = graph.node(node_id);
    const std::array<int, 3> dirs = {(direction + kDirections - 1) % kDirections, direction,
                                     (direction + 1) % kDirections};
    for (int i = 0; i < 3; ++i) {
        DirectionSlot& slot = node.slots[static_cast<size_t>(dirs[static_cast<size_t>(i)])];
        slot.exploration_score = exploration_scores[static_cast<size_t>(i)]; // latest wins
        slot.last_update_t = t;
    }
    DirectionSlot& front = node.slots[static_cast<size_t>(direction)];
    front.closeness = closeness;
    front.last_update_t = t;
}

struct Frontier {
    int id = 0;
    std::vector<int> cells; // sorted linear indices, explored-free
    Point centroid;
    CellIndex anchor; // cluster cell nearest the centroid; navigation goal
    SlotRef parent;
};

struct FrontierMask {
    std::set<SlotRef> live;
    bool has(const SlotRef& s) const { return live.count(s) > 0; }
    bool empty() const { return live.empty(); }
};

namespace detail {

inline size_t sorted_overlap(const std::vector<int>& a, const std::vector<int>& b) {
    size_t i = 0, j = 0, n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else { ++n; ++i; ++j; }
    }
    return n;
}

} // namespace detail

// Smallest clusters are noise; ignoring them mirrors the known failure mode
// of tiny frontier slivers.
inline constexpr size_t kMinFrontierCells = 2;

struct FrontierDetection {
    std::vector<Frontier> frontiers;
    FrontierMask mask;
};

// Frontier cells are explored-free with an unknown 4-neighbor, clustered
// 8-connected. Clusters inherit their parent node-direction from the
// previous step's frontier with the largest cell overlap; brand-new
// clusters hang off the current node in the direction of their centroid.
inline FrontierDetection detect_frontiers(const ExploredMap& map,
                                          const std::vector<Frontier>& prev_frontiers,
                                          const Pose& agent, const SlotRef& current) {
    const int w = map.width();
    const int h = map.height();
    std::vector<uint8_t> is_frontier(static_cast<size_t>(w) * h, 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const CellIndex c{x, y};
            if (map.at(c) != Explored::Free) continue;
            const CellIndex neighbors[4] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
            for (const auto& n : neighbors)
                if (map.in_bounds(n) && map.at(n) == Explored::Unknown) {
                    is_frontier[static_cast<size_t>(map.index(c))] = 1;
                    break;
                }
        }

    FrontierDetection out;
    std::vector<int> stack;
    std::vector<uint8_t> seen(static_cast<size_t>(w) * h, 0);
    for (int start = 0; start < w * h; ++start) {
        if (!is_frontier[static_cast<size_t>(start)] || seen[static_cast<size_t>(start)]) continue;
        stack.assign(1, start);
        seen[static_cast<size_t>(start)] = 1;
        std::vector<int> cells;
        while (!stack.empty()) {
            const int idx = stack.back();
            stack.pop_back();
            cells.push_back(idx);
            const CellIndex c = map.cell_at(idx);
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const CellIndex n{c.x + dx, c.y + dy};
                    if (!map.in_bounds(n)) continue;
                    const int nidx = map.index(n);
                    if (is_frontier[static_cast<size_t>(nidx)] && !seen[static_cast<size_t>(nidx)]) {
                        seen[static_cast<size_t>(nidx)] = 1;
                        stack.push_back(nidx);
                    }
                }
        }
        if (cells.size() < kMinFrontierCells) continue;
        std::sort(cells.begin(), cells.end());

        Frontier f;
        f.id = static_cast<int>(out.frontiers.size());
        f.cells = std::move(cells);
        double sx = 0.0, sy = 0.0;
        for (int idx : f.cells) {
            const Point p = cell_center(map.cell_at(idx), map.resolution());
            sx += p.x;
            sy += p.y;
        }
        f.centroid = {sx / static_cast<double>(f.cells.size()),
                      sy / static_cast<double>(f.cells.size())};
        double best_d = 0.0;
        int best_idx = -1;
        for (int idx : f.cells) {
            const double d = euclidean(cell_center(map.cell_at(idx), map.resolution()), f.centroid);
            if (best_idx < 0 || d < best_d) {
                best_idx = idx;
                best_d = d;
            }
        }
        f.anchor = map.cell_at(best_idx);
        out.frontiers.push_back(std::move(f));
    }

    for (auto& f : out.frontiers) {
        const Frontier* best_prev = nullptr;
        size_t best_overlap = 0;
        for (const auto& prev : prev_frontiers) {
            const size_t overlap = detail::sorted_overlap(f.cells, prev.cells);
            if (overlap > best_overlap) {
                best_overlap = overlap;
                best_prev = &prev;
            }
        }
        if (best_prev) {
            f.parent = best_prev->parent;
        } else {
            const double bearing = bearing_deg(agent, f.centroid);
            int dir = current.direction;
            if (bearing > 15.0)
                dir = (dir + 1) % kDirections;
            else if (bearing < -15.0)
                dir = (dir + kDirections - 1) % kDirections;
            f.parent = {current.node, dir};
        }
    }

    for (const auto& f : out.frontiers) out.mask.live.insert(f.parent);
    return out;
}

// Belief state for one episode: explored map + topological graph + the
// frontier set carried across steps for parent inheritance.
class MappingState {
public:
    MappingState(GridShape shape, int object_count)
        : map_(shape), graph_(object_count) {}

    const ExploredMap& map() const { return map_; }
    const TopoGraph& graph() const { return graph_; }
    TopoGraph& graph() { return graph_; }
    int current_node() const { return current_node_; }
    const std::vector<Frontier>& frontiers() const { return frontiers_; }
    const FrontierMask& mask() const { return mask_; }

    // Carve free space along each depth ray, mark struck cells, and update
    // the graph: localize (or grow), stamp the viewing direction, and add
    // an edge on node transition.
    void integrate(const Observation& obs, int t) {
        map_.mark(cell_of(obs.pose.position, map_.resolution()), Explored::Free);
        const int half_fov = static_cast<int>(obs.depth_scan.size() / 2);
        for (size_t k = 0; k < obs.depth_scan.size(); ++k) {
            const RayHit& ray = obs.depth_scan[k];
            const int angle = obs.pose.heading_deg + static_cast<int>(k) - half_fov;
            walk_cells(map_.shape(), obs.pose.position, cos_deg(angle), sin_deg(angle), ray.range,
                       [&](const CellIndex& c, double entry_t) {
                           if (entry_t < ray.range) {
                               map_.mark(c, Explored::Free);
                               return true;
                           }
                           return false; // at the measured range: stop
                       });
            if (ray.hit) map_.mark(ray.cell, Explored::Obstacle);
        }

        const int node = graph_.localize_or_insert(obs.pose.position, t);
        if (current_node_ >= 0 && current_node_ != node) graph_.add_edge(current_node_, node);
        current_node_ = node;
        current_direction_ = direction_slot(obs.pose.heading_deg);
        DirectionSlot& slot = graph_.node(node).slots[static_cast<size_t>(current_direction_)];
        slot.feature_present = true;
        slot.last_update_t = t;
    }

    int current_direction() const { return current_direction_; }

    void refresh_frontiers(const Pose& agent) {
        FrontierDetection d =
            longhot::detect_frontiers(map_, frontiers_, agent, {current_node_, current_direction_});
        frontiers_ = std::move(d.frontiers);
        mask_ = std::move(d.mask);
    }

private:
    ExploredMap map_;
    TopoGraph graph_;
    std::vector<Frontier> frontiers_;
    FrontierMask mask_;
    int current_node_ = -1;
    int current_direction_ = 0;
};

// Representative frontier for one node-direction: among the frontiers with
// that parent, the one whose centroid is nearest their common center.
inline const Frontier* representative_frontier(const std::vector<Frontier>& frontiers,
                                               const SlotRef& slot) {
    double cx = 0.0, cy = 0.0;
    int count = 0;
    for (const auto& f : frontiers)
        if (f.parent == slot) {
            cx += f.centroid.x;
            cy += f.centroid.y;
            ++count;
        }
    if (count == 0) return nullptr;
    const Point center{cx / count, cy / count};
    const Frontier* best = nullptr;
    double best_d = 0.0;
    for (const auto& f : frontiers) {
        if (f.parent != slot) continue;
        const double d = euclidean(f.centroid, center);
        if (!best || d < best_d || (d == best_d && f.id < best->id)) {
            best = &f;
            best_d = d;
        }
    }
    return best;
}

// --- Debug dumps -------------------------------------------------------------

inline void save_explored_pgm(const ExploredMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out << "P5\n" << map.width() << " " << map.height() << "\n255\n";
    for (int y = map.height() - 1; y >= 0; --y)
        for (int x = 0; x < map.width(); ++x) {
            const Explored e = map.at({x, y});
            const unsigned char v = e == Explored::Unknown ? 127 : (e == Explored::Free ? 255 : 0);
            out.put(static_cast<char>(v));
        }
}

inline nlohmann::json graph_to_json(const TopoGraph& graph) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : graph.nodes()) {
        nlohmann::json slots = nlohmann::json::array();
        for (const auto& s : n.slots)
            slots.push_back({{"closeness", s.closeness},
                             {"exploration", s.exploration_score},
                             {"feature_present", s.feature_present},
                             {"last_update_t", s.last_update_t}});
        nodes.push_back({{"id", n.id},
                         {"last_visit_t", n.last_visit_t},
                         {"slots", slots},
                         {"x", n.position.x},
                         {"y", n.position.y}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [a, b] : graph.edges()) edges.push_back({a, b});
    return {{"edges", edges}, {"nodes", nodes}};
}

} // namespace longhot
