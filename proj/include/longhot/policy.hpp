#pragma once

#include "longhot/env.hpp"
#include "longhot/mapping.hpp"
#include "longhot/metrics.hpp"
#include "longhot/planning.hpp"
#include "longhot/rng.hpp"
#include "longhot/scores.hpp"
#include "longhot/trace.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace longhot {

enum class PolicyVariant { Full, NoGraph, RandCloseness, RandExplore, NearestFrontier, GreedyPickup };

inline PolicyVariant variant_from_string(const std::string& s) {
    if (s == "full") return PolicyVariant::Full;
    if (s == "no_graph") return PolicyVariant::NoGraph;
    if (s == "rand_closeness") return PolicyVariant::RandCloseness;
    if (s == "rand_explore") return PolicyVariant::RandExplore;
    if (s == "nearest_frontier") return PolicyVariant::NearestFrontier;
    if (s == "greedy_pickup") return PolicyVariant::GreedyPickup;
    throw std::invalid_argument("unknown policy variant: " + s);
}

inline const char* to_string(PolicyVariant v) {
    switch (v) {
        case PolicyVariant::Full: return "full";
        case PolicyVariant::NoGraph: return "no_graph";
        case PolicyVariant::RandCloseness: return "rand_closeness";
        case PolicyVariant::RandExplore: return "rand_explore";
        case PolicyVariant::NearestFrontier: return "nearest_frontier";
        case PolicyVariant::GreedyPickup: return "greedy_pickup";
    }
    return "?";
}

struct HtpConfig {
    PolicyVariant variant = PolicyVariant::Full;
    double trigger_threshold = 0.7;  // current-view closeness that fires pick/drop
    double discover_threshold = 0.2; // stored closeness that makes an object a candidate
    double greedy_trigger = 0.2;     // greedy_pickup baseline trigger
    int subtask_step_limit = 200;    // T_p
    double nav_noise_p = 0.0;
    bool container_first = true;
    std::string closeness_provider = "oracle";
    std::string exploration_provider = "oracle";
    bool exploration_only = false; // coverage harness: never pick or drop
    uint64_t seed = 0;

    // Variants that swap score providers do it here, so the rest of the
    // policy never branches on them.
    HtpConfig normalized() const {
        HtpConfig c = *this;
        if (c.variant == PolicyVariant::RandCloseness) c.closeness_provider = "random";
        if (c.variant == PolicyVariant::RandExplore) c.exploration_provider = "random";
        return c;
    }
};

struct HighLevelAction {
    enum class Tag { Explore, Pickup, Drop };
    Tag tag = Tag::Explore;
    int target = -1; // object id for Pickup

    friend bool operator==(const HighLevelAction&, const HighLevelAction&) = default;
};

inline std::string to_string(const HighLevelAction& a) {
    switch (a.tag) {
        case HighLevelAction::Tag::Explore: return "explore";
        case HighLevelAction::Tag::Pickup: return "pickup[" + std::to_string(a.target) + "]";
        case HighLevelAction::Tag::Drop: return "drop";
    }
    return "?";
}

// The high-level finite state machine. Decision inputs are the set of
// discovered objects (stored closeness exceeded the gate at some point;
// discovery is sticky because slot overwrites can erase a score when the
// object is not visible from the node itself), the stored scores for
// ranking, the hand state and the goal state. Rules run in a fixed order
// (container first by default).
inline HighLevelAction high_level(const TopoGraph& graph, const HandState& hand,
                                  const GoalState& goal_state, const ObjectIds& ids,
                                  const HtpConfig& cfg, const std::set<int>& discovered) {
    const bool at_capacity = !hand.holds_container && hand.held_targets.size() >= 2;
    const bool container_available = hand.empty(); // held container or targets block it

    const auto container_rule = [&]() -> std::optional<HighLevelAction> {
        if (container_available && discovered.count(ids.container()))
            return HighLevelAction{HighLevelAction::Tag::Pickup, ids.container()};
        return std::nullopt;
    };

    if (cfg.container_first)
        if (auto a = container_rule()) return *a;

    if (at_capacity) {
        if (discovered.count(ids.goal())) return {HighLevelAction::Tag::Drop, ids.goal()};
        return {HighLevelAction::Tag::Explore, -1};
    }

    // best discovered target that is neither held nor delivered, ranked by
    // the current stored score (ties keep the lowest id)
    int best_target = -1;
    double best_score = -1.0;
    for (int id = 0; id < ids.target_count; ++id) {
        if (!discovered.count(id)) continue;
        if (hand.held_targets.count(id) || goal_state.delivered.count(id)) continue;
        const double score = graph.best_closeness(id).score;
        if (score > best_score) {
            best_score = score;
            best_target = id;
        }
    }
    if (best_target >= 0) return {HighLevelAction::Tag::Pickup, best_target};

    if (!cfg.container_first)
        if (auto a = container_rule()) return *a;

    if (!hand.held_targets.empty() && discovered.count(ids.goal()))
        return {HighLevelAction::Tag::Drop, ids.goal()};

    return {HighLevelAction::Tag::Explore, -1};
}

// Discovery gate over the stored scores alone (no stickiness): the FSM
// entry point for callers that track nothing.
inline std::set<int> discovered_from_graph(const TopoGraph& graph, const ObjectIds& ids,
                                           const HtpConfig& cfg) {
    std::set<int> out;
    for (int id = 0; id <= ids.goal(); ++id)
        if (graph.best_closeness(id).score > cfg.discover_threshold) out.insert(id);
    return out;
}

enum class SubtaskPhase { GotoNode, Orient, ObjectNav };

struct SubtaskState {
    HighLevelAction action;
    SubtaskPhase phase = SubtaskPhase::GotoNode;
    SlotRef nav_slot;
    int steps_in_subtask = 0;
    int seq = 0; // bumps on every switch; atomically replaces the old subtask
    std::map<int, double> failed_trigger; // object -> score at the last no-op pick/drop
    // greedy local nav can stall against corners (30 degree headings vs 45
    // degree descent); after a stall the planner takes over the last mile
    double best_approach = std::numeric_limits<double>::infinity();
    int stall_steps = 0;
    bool use_planner = false;
};

// Greedy local navigation toward a believed target position: pick the move
// whose successor minimizes belief-map travel plus remaining alignment.
inline Action object_nav(const ExploredMap& map, const Pose& pose, const Point& target,
                         double noise_p, Rng& rng) {
    if (noise_p > 0.0 && rng.next_double() < noise_p) {
        switch (rng.next_below(3)) {
            case 0: return Action::Forward;
            case 1: return Action::TurnLeft;
            default: return Action::TurnRight;
        }
    }

    const CellIndex target_cell = cell_of(target, map.resolution());
    const BeliefField field(map, target_cell, 1);

    // estimated steps to finish from (position, heading)
    const auto estimate = [&](const Point& p, int heading) -> double {
        const CellIndex c = cell_of(p, map.resolution());
        const StepCost steps = field.steps_at(c);
        if (steps.is_unreachable()) return std::numeric_limits<double>::infinity();
        const double travel = steps.meters(map.resolution()) / map.resolution();
        if (steps == StepCost{0, 0}) return 0.0;
        // descent direction: the neighbor continuing a shortest path
        double best_angle = heading;
        StepCost best{};
        bool have = false;
        for (const auto& m : kGridMoves) {
            const CellIndex nb{c.x + m.dx, c.y + m.dy};
            if (!map.traversable(nb)) continue;
            if (m.diagonal && !detail::belief_diagonal_allowed(map, c, m.dx, m.dy)) continue;
            const StepCost through = field.steps_at(nb) + StepCost{m.diagonal ? 0u : 1u, m.diagonal ? 1u : 0u};
            if (through.is_unreachable()) continue;
            if (!have || step_cost_less(through, best)) {
                best = through;
                have = true;
                best_angle = rad_to_deg(std::atan2(m.dy, m.dx));
            }
        }
        const double misalign = have ? std::abs(angle_diff(best_angle, heading)) : 0.0;
        return travel + misalign / kTurnDeg;
    };

    struct Candidate {
        Action action;
        double value;
    };
    std::array<Candidate, 3> candidates{{{Action::Forward, 0.0}, {Action::TurnLeft, 0.0},
                                         {Action::TurnRight, 0.0}}};

    const Point fwd = heading_step(pose.position, pose.heading_deg, map.resolution());
    candidates[0].value = map.traversable(cell_of(fwd, map.resolution()))
                              ? 1.0 + estimate(fwd, pose.heading_deg)
                              : std::numeric_limits<double>::infinity();
    candidates[1].value = 1.0 + estimate(pose.position, normalize_heading(pose.heading_deg + kTurnDeg));
    candidates[2].value = 1.0 + estimate(pose.position, normalize_heading(pose.heading_deg - kTurnDeg));

    Action best = Action::TurnLeft; // unreachable-everywhere fallback: rotate to re-sense
    double best_value = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates)
        if (c.value < best_value) { // ties keep Forward, then TurnLeft
            best = c.action;
            best_value = c.value;
        }
    return best;
}

// Rotate-then-forward follower for an A* path. The path is replanned every
// step, so steering at the immediate next cell is enough; aiming farther
// ahead can cut corners the path deliberately walks around. Returns nothing
// when the goal cell has been reached.
inline std::optional<Action> follow_path(const ExploredMap& map, const Pose& pose,
                                         const PlannedPath& path) {
    if (path.cells.size() < 2 || cell_of(pose.position, map.resolution()) == path.cells.back())
        return std::nullopt; // arrived
    const Point target = cell_center(path.cells[1], map.resolution());

    const double err = bearing_deg(pose, target);
    if (std::abs(err) <= 15.0 + 1e-9) {
        const Point fwd = heading_step(pose.position, pose.heading_deg, map.resolution());
        if (map.traversable(cell_of(fwd, map.resolution()))) return Action::Forward;
        // aligned but the step would clip a believed obstacle: swing off
        if (std::abs(err) > 1e-9) return err > 0.0 ? Action::TurnLeft : Action::TurnRight;
        return Action::TurnLeft;
    }
    return err > 0.0 ? Action::TurnLeft : Action::TurnRight;
}

struct PolicyStepRecord {
    Action action = Action::Forward;
    std::string subtask;
    double reward_explore = 0.0;
    double reward_nav = 0.0;
};

// Full HTP controller state for one episode.
class HtpPolicy {
public:
    HtpPolicy(const OccupancyGrid& grid, const ObjectIds& ids, HtpConfig cfg)
        : cfg_(cfg.normalized()),
          ids_(ids),
          mapping_(shape_of(grid), ids.goal() + 1),
          closeness_(provider_from_string(cfg_.closeness_provider), mix_seed(cfg_.seed, 0xC105u)),
          exploration_(provider_from_string(cfg_.exploration_provider), mix_seed(cfg_.seed, 0xE281u)),
          noise_rng_(mix_seed(cfg_.seed, 0x1705Eu)) {}

    const HtpConfig& config() const { return cfg_; }
    const MappingState& mapping() const { return mapping_; }
    const std::set<int>& found() const { return found_; }
    const std::set<int>& discovered() const { return discovered_; }
    const std::map<int, Point>& believed_positions() const { return believed_; }
    const SubtaskState& subtask() const { return subtask_; }

    // One control step: integrate the observation, refresh frontiers and
    // scores, run the FSM, and emit a primitive action.
    PolicyStepRecord decide(ScoreContext& ctx) {
        const Observation& obs = ctx.observation;
        mapping_.integrate(obs, ctx.t);
        mapping_.refresh_frontiers(obs.pose);

        update_beliefs(ctx);
        store_current_scores(ctx);

        PolicyStepRecord rec;
        rec.reward_explore = exploration_reward(newly_found_, all_found_now_, ctx.rewards);

        const HighLevelAction next =
            cfg_.exploration_only
                ? HighLevelAction{HighLevelAction::Tag::Explore, -1}
                : high_level(mapping_.graph(), ctx.state.hand, ctx.state.goal_state, ids_, cfg_,
                             discovered_);
        if (!(next == subtask_.action)) switch_subtask(next);
        subtask_.steps_in_subtask += 1;

        if (subtask_.action.tag == HighLevelAction::Tag::Explore)
            rec.action = explore_step(ctx);
        else
            rec.action = pickdrop_step(ctx);

        rec.subtask = to_string(subtask_.action) + "#" + std::to_string(subtask_.seq);
        return rec;
    }

    // The believed position of the active pick/drop object; the r^n channel
    // measures progress toward it.
    std::optional<Point> nav_object_position() const {
        if (subtask_.action.tag == HighLevelAction::Tag::Explore) return std::nullopt;
        const int object = subtask_.action.tag == HighLevelAction::Tag::Drop ? ids_.goal()
                                                                             : subtask_.action.target;
        const auto it = believed_.find(object);
        if (it == believed_.end()) return std::nullopt;
        return it->second;
    }

    // Feedback after the env applied the action: detect no-op pick/drops so
    // the trigger is not re-fired until the view improves.
    void observe_outcome(const EnvState& before, const EnvState& after, Action action) {
        if (action == Action::Pickup) {
            const bool changed = before.hand.held_targets != after.hand.held_targets ||
                                 before.hand.holds_container != after.hand.holds_container;
            if (!changed && pending_trigger_) {
                subtask_.failed_trigger[pending_trigger_->first] = pending_trigger_->second;
            }
        }
        pending_trigger_.reset();
    }

private:
    // --- belief bookkeeping ---------------------------------------------------

    void update_beliefs(const ScoreContext& ctx) {
        newly_found_ = 0;
        for (const auto& v : ctx.observation.visible) {
            // position reconstructed from the sensed range and bearing
            const double angle = deg_to_rad(static_cast<double>(ctx.observation.pose.heading_deg) +
                                            v.bearing_deg);
            const Point p{ctx.observation.pose.position.x + v.distance * std::cos(angle),
                          ctx.observation.pose.position.y + v.distance * std::sin(angle)};
            believed_[v.id] = p;
            if (v.distance < ctx.rewards.found_distance && !found_.count(v.id)) {
                found_.insert(v.id);
                ++newly_found_;
            }
        }
        const int all = ids_.goal() + 1;
        all_found_now_ = newly_found_ > 0 && static_cast<int>(found_.size()) == all;
    }

    void store_current_scores(ScoreContext& ctx) {
        std::vector<double> closeness(static_cast<size_t>(ids_.goal() + 1), 0.0);
        for (int id = 0; id <= ids_.goal(); ++id) {
            const double score = closeness_.closeness(ctx, id);
            closeness[static_cast<size_t>(id)] = score;
            if (score > cfg_.discover_threshold) discovered_.insert(id); // sticky
        }

        std::set<int> undiscovered;
        for (int id = 0; id <= ids_.goal(); ++id) {
            if (ctx.state.hand.held_targets.count(id) || ctx.state.goal_state.delivered.count(id))
                continue;
            if (id == ids_.container() && ctx.state.hand.holds_container) continue;
            if (!discovered_.count(id)) undiscovered.insert(id);
        }
        const auto explor = exploration_.exploration(ctx, mapping_.frontiers(), undiscovered);

        store_scores(mapping_.graph(), mapping_.current_node(), mapping_.current_direction(), explor,
                     closeness, ctx.t);
        for (int id = 0; id <= ids_.goal(); ++id)
            if (mapping_.graph().best_closeness(id).score > cfg_.discover_threshold)
                discovered_.insert(id);
    }

    void switch_subtask(const HighLevelAction& next) {
        // FSM safety: container pickups need empty hands, targets must be
        // outstanding. high_level guarantees this by construction.
        SubtaskState fresh;
        fresh.action = next;
        fresh.seq = subtask_.seq + 1;
        if (next.tag != HighLevelAction::Tag::Explore) {
            const int object = next.tag == HighLevelAction::Tag::Drop ? ids_.goal() : next.target;
            const auto best = mapping_.graph().best_closeness(object);
            if (best.score > cfg_.discover_threshold) fresh.nav_slot = best.slot;
        }
        subtask_ = std::move(fresh);
    }

    // --- exploration ------------------------------------------------------------

    Action explore_step(ScoreContext& ctx) {
        const auto& frontiers = mapping_.frontiers();
        if (frontiers.empty()) return exhausted_step(ctx);

        const Frontier* goal_frontier = nullptr;
        if (cfg_.variant == PolicyVariant::NearestFrontier) {
            const BeliefField from_agent(mapping_.map(),
                                         cell_of(ctx.state.pose.position, mapping_.map().resolution()), 2);
            StepCost best = StepCost::unreachable();
            for (const auto& f : frontiers) {
                const StepCost c = from_agent.steps_at(f.anchor);
                if (c.is_unreachable()) continue;
                if (!goal_frontier || step_cost_less(c, best)) {
                    goal_frontier = &f;
                    best = c;
                }
            }
        } else {
            // weighted: best stored exploration score over live node-directions.
            // Exact ties keep the incumbent slot (the per-step score refresh
            // would otherwise flip the recency tie-break with every head
            // turn), then fall to recency and the lowest node id.
            const auto& graph = mapping_.graph();
            SlotRef best_slot;
            double best_score = -1.0;
            int best_update = -1;
            for (const auto& node : graph.nodes())
                for (int d = 0; d < kDirections; ++d) {
                    const SlotRef ref{node.id, d};
                    if (!mapping_.mask().has(ref)) continue;
                    const auto& slot = node.slots[static_cast<size_t>(d)];
                    bool better;
                    if (best_slot.node < 0) better = true;
                    else if (slot.exploration_score != best_score)
                        better = slot.exploration_score > best_score;
                    else if (ref == last_explore_slot_ || best_slot == last_explore_slot_)
                        better = ref == last_explore_slot_;
                    else
                        better = slot.last_update_t > best_update;
                    if (better) {
                        best_slot = ref;
                        best_score = slot.exploration_score;
                        best_update = slot.last_update_t;
                    }
                }
            if (best_slot.node >= 0) {
                last_explore_slot_ = best_slot;
                goal_frontier = representative_frontier(frontiers, best_slot);
            }
        }
        if (!goal_frontier) return exhausted_step(ctx);

        const auto path = astar(mapping_.map(), cell_of(ctx.state.pose.position, mapping_.map().resolution()),
                                goal_frontier->anchor);
        if (!path) return Action::TurnLeft;
        const auto action = follow_path(mapping_.map(), ctx.state.pose, *path);
        return action.value_or(Action::TurnLeft); // on the frontier: scan
    }

    // No live frontier: approach a sighted-but-undiscovered object (the goal
    // included; it may have only ever been glimpsed from beyond the gate
    // distance), otherwise spin to rescan.
    Action exhausted_step(ScoreContext& ctx) {
        int best = -1;
        double best_d = 0.0;
        for (const auto& [id, p] : believed_) {
            if (ctx.state.goal_state.delivered.count(id) || ctx.state.hand.held_targets.count(id))
                continue;
            if (id == ids_.container() && ctx.state.hand.holds_container) continue;
            if (discovered_.count(id)) continue;
            const double d = euclidean(p, ctx.state.pose.position);
            if (best < 0 || d < best_d) {
                best = id;
                best_d = d;
            }
        }
        if (best >= 0) {
            const auto path =
                astar(mapping_.map(), cell_of(ctx.state.pose.position, mapping_.map().resolution()),
                      cell_of(believed_.at(best), mapping_.map().resolution()));
            if (path)
                if (auto a = follow_path(mapping_.map(), ctx.state.pose, *path)) return *a;
        }
        return Action::TurnLeft;
    }

    // --- pick / drop ------------------------------------------------------------

    Action pickdrop_step(ScoreContext& ctx) {
        const bool dropping = subtask_.action.tag == HighLevelAction::Tag::Drop;
        const int object = dropping ? ids_.goal() : subtask_.action.target;

        // trigger on the current view, whatever the phase
        if (auto triggered = check_trigger(ctx, object, dropping)) return *triggered;

        // give control back after the step budget
        if (subtask_.steps_in_subtask > cfg_.subtask_step_limit) {
            switch_subtask({HighLevelAction::Tag::Explore, -1});
            return explore_step(ctx);
        }

        if (cfg_.variant == PolicyVariant::NoGraph) subtask_.phase = SubtaskPhase::ObjectNav;
        // best slot already overwritten (seen from elsewhere): skip the node
        // detour and navigate on the believed position directly
        if (subtask_.nav_slot.node < 0) subtask_.phase = SubtaskPhase::ObjectNav;

        if (subtask_.phase == SubtaskPhase::GotoNode) {
            const auto& node = mapping_.graph().node(subtask_.nav_slot.node);
            if (euclidean(node.position, ctx.state.pose.position) <= 0.5) {
                subtask_.phase = SubtaskPhase::Orient;
            } else {
                const auto path =
                    astar(mapping_.map(), cell_of(ctx.state.pose.position, mapping_.map().resolution()),
                          cell_of(node.position, mapping_.map().resolution()));
                if (path)
                    if (auto a = follow_path(mapping_.map(), ctx.state.pose, *path)) return *a;
                subtask_.phase = SubtaskPhase::Orient; // arrived or no path: move on
            }
        }

        if (subtask_.phase == SubtaskPhase::Orient) {
            const int want = subtask_.nav_slot.direction * kTurnDeg;
            const double err = angle_diff(want, ctx.state.pose.heading_deg);
            if (err > 1.0) return Action::TurnLeft;
            if (err < -1.0) return Action::TurnRight;
            subtask_.phase = SubtaskPhase::ObjectNav;
        }

        // last mile: local policy toward the believed position
        const auto it = believed_.find(object);
        if (it == believed_.end()) return Action::TurnLeft; // never sighted: scan

        const double approach = euclidean(it->second, ctx.state.pose.position);
        if (approach < subtask_.best_approach - 0.05) {
            subtask_.best_approach = approach;
            subtask_.stall_steps = 0;
        } else if (++subtask_.stall_steps > 15) {
            subtask_.use_planner = true;
        }

        if (subtask_.use_planner) {
            const auto path =
                astar(mapping_.map(), cell_of(ctx.state.pose.position, mapping_.map().resolution()),
                      cell_of(it->second, mapping_.map().resolution()));
            if (path)
                if (auto a = follow_path(mapping_.map(), ctx.state.pose, *path)) return *a;
            return Action::TurnLeft; // arrived or boxed in: scan for the trigger
        }
        return object_nav(mapping_.map(), ctx.state.pose, it->second, cfg_.nav_noise_p, noise_rng_);
    }

    std::optional<Action> check_trigger(ScoreContext& ctx, int object, bool dropping) {
        const auto fire = [&](int id, double score) -> std::optional<Action> {
            const auto failed = subtask_.failed_trigger.find(id);
            if (failed != subtask_.failed_trigger.end() && score <= failed->second)
                return std::nullopt; // wait until the view improves
            pending_trigger_ = std::make_pair(id, score);
            return dropping ? Action::Drop : Action::Pickup;
        };

        if (!dropping && cfg_.variant == PolicyVariant::GreedyPickup) {
            // scripted baseline: grab whenever anything pickable looks close
            for (int id = 0; id <= ids_.container(); ++id) {
                if (ctx.state.goal_state.delivered.count(id) || ctx.state.hand.held_targets.count(id))
                    continue;
                if (id == ids_.container() && !ctx.state.hand.empty()) continue;
                const double score = closeness_.closeness(ctx, id);
                if (score > cfg_.greedy_trigger)
                    if (auto a = fire(id, score)) return a;
            }
            return std::nullopt;
        }

        const double score = closeness_.closeness(ctx, object);
        if (score <= cfg_.trigger_threshold) return std::nullopt;
        if (!dropping) {
            // only emit when the target is the best-looking pickable object,
            // so the env's closest-object rule grabs the intended one
            for (const auto& [id, p] : ctx.state.in_scene) {
                if (id == object) continue;
                if (id == ids_.container() && !ctx.state.hand.empty()) continue;
                if (ids_.is_target(id) && !ctx.state.hand.has_capacity()) continue;
                if (closeness_.closeness(ctx, id) > score) return std::nullopt;
            }
        }
        return fire(object, score);
    }

    HtpConfig cfg_;
    ObjectIds ids_;
    MappingState mapping_;
    ScoreProvider closeness_;
    ScoreProvider exploration_;
    Rng noise_rng_;

    std::set<int> found_;
    std::set<int> discovered_; // sticky: objects whose closeness once passed the gate
    SlotRef last_explore_slot_;
    std::map<int, Point> believed_;
    SubtaskState subtask_;
    int newly_found_ = 0;
    bool all_found_now_ = false;
    std::optional<std::pair<int, double>> pending_trigger_;
};

struct EpisodeRunOutcome {
    EpisodeResult result;
    std::vector<TraceRecord> trace;
};

// The full control loop: sense -> integrate -> score -> decide -> step,
// until the episode terminates. Pure given (grid, episode, configs).
inline EpisodeRunOutcome run_episode(const OccupancyGrid& grid, const Episode& episode,
                                     const EnvConfig& env_cfg, const HtpConfig& policy_cfg) {
    EnvSim env(grid, episode, env_cfg);
    HtpPolicy policy(grid, env.ids(), policy_cfg);
    std::vector<TraceRecord> trace;
    Observation obs = env.reset();

    while (!env.done()) {
        ScoreContext ctx{grid,     env.fields(), env.state(), episode,
                         env.ids(), obs,          env.state().t, env_cfg.rewards};
        const PolicyStepRecord rec = policy.decide(ctx);

        const EnvState before = env.state();
        const auto nav_target = policy.nav_object_position();
        const double prev_d =
            nav_target ? env.fields().meters(*nav_target, before.pose.position) : 0.0;

        StepResult sr = env.step(rec.action);
        policy.observe_outcome(before, env.state(), rec.action);

        TraceRecord tr = make_trace_record(env.state().t, rec.action, env.state(), sr.done, sr.reason);
        tr.subtask = rec.subtask;
        tr.reward_explore = rec.reward_explore;
        if (nav_target) {
            const double cur_d = env.fields().meters(*nav_target, env.state().pose.position);
            tr.reward_nav = navigation_reward(prev_d, cur_d, cur_d <= env_cfg.rewards.reach_threshold,
                                              env.state().collided_last, env_cfg.rewards);
        }
        trace.push_back(tr);
        obs = std::move(sr.observation);
    }

    EpisodeRunOutcome out{score_trace(grid, episode, trace), std::move(trace)};
    out.result.variant = to_string(policy_cfg.variant);
    return out;
}

struct CoverageOutcome {
    double revealed_fraction = 0.0; // of ground-truth-reachable free cells
    int steps_used = 0;
};

// Exploration liveness harness: a zero-target episode driven by the
// exploration module alone, measured against the reachable free space.
inline CoverageOutcome run_coverage(const OccupancyGrid& grid, const Pose& start,
                                    PolicyVariant variant, int max_steps, uint64_t seed = 0) {
    Episode episode;
    episode.scene_id = "coverage";
    episode.level.name = "coverage";
    episode.level.target_count = 0;
    episode.goal = start.position;
    episode.container = start.position;
    episode.start = start;

    EnvConfig env_cfg;
    env_cfg.max_steps = max_steps;
    HtpConfig policy_cfg;
    policy_cfg.variant = variant;
    policy_cfg.exploration_only = true;
    policy_cfg.seed = seed;

    EnvSim env(grid, episode, env_cfg);
    HtpPolicy policy(grid, env.ids(), policy_cfg);
    Observation obs = env.reset();

    int steps = 0;
    while (!env.done()) {
        ScoreContext ctx{grid,     env.fields(), env.state(), episode,
                         env.ids(), obs,          env.state().t, env_cfg.rewards};
        const PolicyStepRecord rec = policy.decide(ctx);
        if (policy.mapping().frontiers().empty()) break; // nothing left to reveal
        StepResult sr = env.step(rec.action);
        policy.observe_outcome(env.state(), env.state(), rec.action);
        obs = std::move(sr.observation);
        ++steps;
    }

    const CellIndex start_cell = grid.cell_of_point(start.position);
    std::vector<uint8_t> reachable(static_cast<size_t>(grid.cell_count()), 0);
    {
        std::vector<CellIndex> stack{start_cell};
        reachable[static_cast<size_t>(grid.index(start_cell))] = 1;
        while (!stack.empty()) {
            const CellIndex c = stack.back();
            stack.pop_back();
            for (const auto& m : kGridMoves) {
                const CellIndex n{c.x + m.dx, c.y + m.dy};
                if (!grid.is_free(n)) continue;
                if (m.diagonal && !diagonal_allowed(grid, c, m.dx, m.dy)) continue;
                uint8_t& flag = reachable[static_cast<size_t>(grid.index(n))];
                if (!flag) {
                    flag = 1;
                    stack.push_back(n);
                }
            }
        }
    }
    int reachable_count = 0;
    int revealed = 0;
    for (int i = 0; i < grid.cell_count(); ++i) {
        if (!reachable[static_cast<size_t>(i)]) continue;
        ++reachable_count;
        if (policy.mapping().map().at(grid.cell_at(i)) == Explored::Free) ++revealed;
    }
    return {reachable_count > 0 ? static_cast<double>(revealed) / reachable_count : 0.0, steps};
}

} // namespace longhot
