#pragma once

#include "longhot/distance.hpp"
#include "longhot/episode.hpp"
#include "longhot/geometry.hpp"
#include "longhot/grid.hpp"
#include "longhot/visibility.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace longhot {

struct EpisodeFinished : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Action { Forward, TurnLeft, TurnRight, Pickup, Drop };

inline const char* to_string(Action a) {
    switch (a) {
        case Action::Forward: return "forward";
        case Action::TurnLeft: return "turn_left";
        case Action::TurnRight: return "turn_right";
        case Action::Pickup: return "pickup";
        case Action::Drop: return "drop";
    }
    return "?";
}

inline Action action_from_string(const std::string& s) {
    if (s == "forward") return Action::Forward;
    if (s == "turn_left") return Action::TurnLeft;
    if (s == "turn_right") return Action::TurnRight;
    if (s == "pickup") return Action::Pickup;
    if (s == "drop") return Action::Drop;
    throw std::invalid_argument("unknown action: " + s);
}

enum class Termination { None, Success, Timeout, WrongPickup };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::None: return "none";
        case Termination::Success: return "success";
        case Termination::Timeout: return "timeout";
        case Termination::WrongPickup: return "wrong_pickup";
    }
    return "?";
}

inline Termination termination_from_string(const std::string& s) {
    if (s == "none") return Termination::None;
    if (s == "success") return Termination::Success;
    if (s == "timeout") return Termination::Timeout;
    if (s == "wrong_pickup") return Termination::WrongPickup;
    throw std::invalid_argument("unknown termination: " + s);
}

// Object ids within one episode: targets are 0..K-1, then the container,
// then the goal marker.
struct ObjectIds {
    int target_count = 0;
    int container() const { return target_count; }
    int goal() const { return target_count + 1; }
    bool is_target(int id) const { return id >= 0 && id < target_count; }
};

struct HandState {
    bool holds_container = false;
    std::set<int> held_targets;

    bool empty() const { return !holds_container && held_targets.empty(); }
    // Two targets at most, unless the container lifts the limit.
    bool has_capacity() const { return holds_container || held_targets.size() < 2; }
};

struct GoalState {
    std::set<int> delivered;
};

struct EnvState {
    Pose pose;
    HandState hand;
    GoalState goal_state;
    std::map<int, Point> in_scene; // targets and container only
    int t = 0;
    bool collided_last = false;
};

struct VisibleObject {
    int id = 0;
    double distance = 0.0; // straight-line sensed range, meters
    double bearing_deg = 0.0;
};

struct Observation {
    Pose pose;
    HandState hand;
    GoalState goal_state;
    int t = 0;
    std::vector<VisibleObject> visible;
    // Per-degree rays across the FOV, lowest bearing first: first-hit range
    // plus the struck cell so map carving can replay the walk exactly.
    std::vector<RayHit> depth_scan;

    const VisibleObject* find(int id) const {
        for (const auto& v : visible)
            if (v.id == id) return &v;
        return nullptr;
    }
};

struct RewardConfig {
    double explore_found = 1.0;
    double explore_success = 5.0;
    double explore_slack = -0.01;
    double nav_reached = 2.5;
    double nav_slack = -0.01;
    double nav_collision = -0.1;
    double reach_threshold = 1.5; // d_th
    double found_distance = 5.0;
};

struct EnvConfig {
    int max_steps = 2500;
    double interact_range = 1.5;
    double sensor_range = 5.0;
    double fov_deg = 90.0;
    double step_m = 0.25;
    bool strict_termination = false;
    RewardConfig rewards;
};

// r^e: slack every step, a bonus per object found this step, and a success
// bonus the step the last object is found.
inline double exploration_reward(int newly_found, bool all_found_now, const RewardConfig& cfg) {
    return cfg.explore_slack + newly_found * cfg.explore_found +
           (all_found_now ? cfg.explore_success : 0.0);
}

// r^n: slack + geodesic progress toward the nav target, plus arrival bonus
// and collision penalty.
inline double navigation_reward(double prev_d, double cur_d, bool reached, bool collided,
                                const RewardConfig& cfg) {
    return (reached ? cfg.nav_reached : 0.0) + cfg.nav_slack + (prev_d - cur_d) +
           (collided ? cfg.nav_collision : 0.0);
}

// Caches geodesic fields by source cell. Objects and the goal rarely move,
// so each distinct position pays for one Dijkstra.
class FieldCache {
public:
    explicit FieldCache(const OccupancyGrid& grid) : grid_(&grid) {}

    const DistanceField& at(const Point& source) {
        const int key = grid_->index(grid_->cell_of_point(source));
        auto it = fields_.find(key);
        if (it == fields_.end())
            it = fields_.emplace(key, std::make_unique<DistanceField>(*grid_, source)).first;
        return *it->second;
    }

    // Geodesic from an (infrequently moving) source to a query point.
    double meters(const Point& source, const Point& query) {
        return at(source).meters_at(query);
    }

private:
    const OccupancyGrid* grid_;
    std::unordered_map<int, std::unique_ptr<DistanceField>> fields_;
};

struct StepResult {
    Observation observation;
    bool done = false;
    Termination reason = Termination::None;
};

// The transport task simulator. One instance per episode worker; the grid
// is shared and immutable.
class EnvSim {
public:
    EnvSim(const OccupancyGrid& grid, Episode episode, EnvConfig config = {})
        : grid_(&grid), episode_(std::move(episode)), config_(config), fields_(grid) {
        ids_.target_count = episode_.target_count();
        reset();
    }

    Observation reset() {
        state_ = EnvState{};
        state_.pose = episode_.start;
        for (const auto& o : episode_.objects) state_.in_scene[o.id] = o.position;
        state_.in_scene[ids_.container()] = episode_.container;
        done_ = false;
        reason_ = Termination::None;
        return sense();
    }

    const EnvState& state() const { return state_; }
    const Episode& episode() const { return episode_; }
    const EnvConfig& config() const { return config_; }
    const ObjectIds& ids() const { return ids_; }
    const OccupancyGrid& grid() const { return *grid_; }
    bool done() const { return done_; }
    Termination reason() const { return reason_; }
    FieldCache& fields() { return fields_; }

    double geodesic_to_agent(const Point& from) {
        return fields_.meters(from, state_.pose.position);
    }

    StepResult step(Action action) {
        if (done_) throw EpisodeFinished("step on finished episode");
        state_.collided_last = false;

        switch (action) {
            case Action::TurnLeft:
                state_.pose.heading_deg = normalize_heading(state_.pose.heading_deg + kTurnDeg);
                break;
            case Action::TurnRight:
                state_.pose.heading_deg = normalize_heading(state_.pose.heading_deg - kTurnDeg);
                break;
            case Action::Forward: {
                const Point dest = heading_step(state_.pose.position, state_.pose.heading_deg, config_.step_m);
                if (grid_->point_free(dest))
                    state_.pose.position = dest;
                else
                    state_.collided_last = true;
                break;
            }
            case Action::Pickup:
                apply_pickup();
                break;
            case Action::Drop:
                apply_drop();
                break;
        }

        state_.t += 1;
        check_invariants();

        if (reason_ == Termination::WrongPickup) {
            done_ = true;
        } else if (ids_.target_count > 0 &&
                   static_cast<int>(state_.goal_state.delivered.size()) == ids_.target_count) {
            done_ = true;
            reason_ = Termination::Success;
        } else if (state_.t >= config_.max_steps) {
            done_ = true;
            reason_ = Termination::Timeout;
        }

        return {sense(), done_, reason_};
    }

    // Geometric sensing: per-degree depth across the FOV plus the objects
    // that are in view, in range, and unoccluded.
    Observation sense() {
        Observation obs;
        obs.pose = state_.pose;
        obs.hand = state_.hand;
        obs.goal_state = state_.goal_state;
        obs.t = state_.t;

        const int half_fov = static_cast<int>(config_.fov_deg / 2.0);
        obs.depth_scan.reserve(static_cast<size_t>(2 * half_fov + 1));
        for (int off = -half_fov; off <= half_fov; ++off)
            obs.depth_scan.push_back(raycast(*grid_, state_.pose.position,
                                             state_.pose.heading_deg + off, config_.sensor_range));

        auto consider = [&](int id, const Point& p) {
            const double dist = euclidean(state_.pose.position, p);
            if (dist > config_.sensor_range) return;
            if (dist <= 1e-9) { // at the agent's feet: visible at any heading
                obs.visible.push_back({id, 0.0, 0.0});
                return;
            }
            const double bearing = bearing_deg(state_.pose, p);
            if (std::abs(bearing) > config_.fov_deg / 2.0) return;
            if (!line_of_sight(*grid_, state_.pose.position, p)) return;
            obs.visible.push_back({id, dist, bearing});
        };
        for (const auto& [id, p] : state_.in_scene) consider(id, p);
        consider(ids_.goal(), episode_.goal);
        std::sort(obs.visible.begin(), obs.visible.end(),
                  [](const VisibleObject& a, const VisibleObject& b) { return a.id < b.id; });
        return obs;
    }

private:
    bool pickup_qualifies(int id) const {
        if (id == ids_.container()) return state_.hand.empty();
        return state_.hand.has_capacity();
    }

    void apply_pickup() {
        int best_id = -1;
        StepCost best_cost = StepCost::unreachable();
        for (const auto& [id, p] : state_.in_scene) {
            if (!pickup_qualifies(id)) continue;
            const StepCost c = fields_.at(p).steps_at(grid_->cell_of_point(state_.pose.position));
            if (c.meters(grid_->resolution()) > config_.interact_range) continue;
            if (best_id < 0 || step_cost_less(c, best_cost)) {
                best_id = id;
                best_cost = c;
            }
        }
        if (best_id < 0) {
            if (config_.strict_termination) reason_ = Termination::WrongPickup;
            return; // no-op in standard mode
        }
        state_.in_scene.erase(best_id);
        if (best_id == ids_.container())
            state_.hand.holds_container = true;
        else
            state_.hand.held_targets.insert(best_id);
    }

    void apply_drop() {
        if (state_.hand.empty()) return;
        const bool at_goal =
            fields_.meters(episode_.goal, state_.pose.position) <= config_.interact_range;
        for (int id : state_.hand.held_targets) {
            if (at_goal)
                state_.goal_state.delivered.insert(id);
            else
                state_.in_scene[id] = state_.pose.position;
        }
        state_.hand.held_targets.clear();
        if (state_.hand.holds_container) {
            state_.in_scene[ids_.container()] = state_.pose.position;
            state_.hand.holds_container = false;
        }
    }

    // Object conservation and capacity, checked after every step.
    void check_invariants() const {
        if (!state_.hand.holds_container && state_.hand.held_targets.size() > 2)
            throw std::logic_error("capacity violated");
        for (int id = 0; id < ids_.target_count; ++id) {
            const int places = (state_.in_scene.count(id) ? 1 : 0) +
                               (state_.hand.held_targets.count(id) ? 1 : 0) +
                               (state_.goal_state.delivered.count(id) ? 1 : 0);
            if (places != 1) throw std::logic_error("object conservation violated");
        }
        const int container_places = (state_.in_scene.count(ids_.container()) ? 1 : 0) +
                                     (state_.hand.holds_container ? 1 : 0);
        if (container_places != 1) throw std::logic_error("container conservation violated");
    }

    const OccupancyGrid* grid_;
    Episode episode_;
    EnvConfig config_;
    ObjectIds ids_;
    EnvState state_;
    FieldCache fields_;
    bool done_ = false;
    Termination reason_ = Termination::None;
};

} // namespace longhot
