#pragma once

#include "longhot/distance.hpp"
#include "longhot/env.hpp"
#include "longhot/episode.hpp"
#include "longhot/trace.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace longhot {

struct InfeasibleEpisode : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EpisodeResult {
    int episode_id = 0;
    std::string scene_id;
    std::string level_name;
    int target_count = 0;
    bool success = false;
    double progress = 0.0;
    double spl = 0.0;
    double ppl = 0.0;
    double energy = 1.0;
    double picked = 0.0;
    double path_length_m = 0.0; // G_pl
    double ref_length_m = 0.0;  // G_ref
    int steps = 0;
    Termination termination = Termination::None;
    std::string variant;
    std::string error; // non-empty when the episode crashed in a suite run
};

// Reference tour: start -> container -> greedy nearest unvisited object
// chain -> goal, all geodesic. Used as the normalizer for SPL/PPL.
inline double reference_length(const OccupancyGrid& grid, const Episode& episode) {
    FieldCache fields(grid);
    double total = 0.0;

    const auto leg = [&](const Point& stop, const Point& from) {
        const double d = fields.meters(stop, from);
        if (!std::isfinite(d)) throw InfeasibleEpisode("reference tour leg unreachable");
        return d;
    };

    Point at = episode.start.position;
    total += leg(episode.container, at);
    at = episode.container;

    std::set<int> remaining;
    for (const auto& o : episode.objects) remaining.insert(o.id);
    while (!remaining.empty()) {
        int best = -1;
        double best_d = 0.0;
        for (int id : remaining) {
            const double d = leg(episode.objects[static_cast<size_t>(id)].position, at);
            if (best < 0 || d < best_d) { // ties keep the lowest id
                best = id;
                best_d = d;
            }
        }
        total += best_d;
        at = episode.objects[static_cast<size_t>(best)].position;
        remaining.erase(best);
    }

    total += leg(episode.goal, at);
    return total;
}

// SPL/PPL efficiency factor: any run no longer than the reference counts in
// full; longer runs are discounted by G_ref / G_pl.
inline double path_efficiency_factor(double path_length, double ref_length) {
    if (path_length <= ref_length) return 1.0;
    return ref_length / path_length;
}

// Score one finished episode from its trace. Object end positions are
// reconstructed by walking the hand-state transitions.
inline EpisodeResult score_trace(const OccupancyGrid& grid, const Episode& episode,
                                 const std::vector<TraceRecord>& trace) {
    const int k = episode.target_count();
    if (k < 1) throw InvalidTrace("cannot score an episode without targets");

    EpisodeResult r;
    r.episode_id = episode.id;
    r.scene_id = episode.scene_id;
    r.level_name = episode.level.name;
    r.target_count = k;
    r.ref_length_m = reference_length(grid, episode);

    std::map<int, Point> position; // undelivered, un-held targets
    for (const auto& o : episode.objects) position[o.id] = o.position;
    std::set<int> ever_picked;
    std::set<int> held;
    std::set<int> delivered;

    int forwards = 0;
    for (const auto& rec : trace) {
        if (rec.action == Action::Forward && !rec.collided) ++forwards;

        const std::set<int> now_held(rec.held.begin(), rec.held.end());
        const std::set<int> now_delivered(rec.delivered.begin(), rec.delivered.end());
        if (!std::includes(now_delivered.begin(), now_delivered.end(), delivered.begin(),
                           delivered.end()))
            throw InvalidTrace("delivered set shrank");

        for (int id : now_held) {
            if (!held.count(id)) {
                if (!position.count(id)) throw InvalidTrace("picked an object that is not in scene");
                position.erase(id);
                ever_picked.insert(id);
            }
        }
        for (int id : held) {
            if (!now_held.count(id)) {
                if (now_delivered.count(id)) continue;
                position[id] = rec.pose.position; // dropped here
            }
        }
        held = now_held;
        delivered = now_delivered;
    }

    r.steps = static_cast<int>(trace.size());
    r.termination = trace.empty() ? Termination::None : trace.back().reason;
    r.success = r.termination == Termination::Success;
    r.path_length_m = 0.25 * forwards;
    r.progress = static_cast<double>(delivered.size()) / k;
    ever_picked.insert(delivered.begin(), delivered.end()); // delivered implies picked
    r.picked = static_cast<double>(ever_picked.size()) / k;

    // Episode energy: remaining goal-distance mass over the initial mass.
    FieldCache fields(grid);
    const Point final_pose = trace.empty() ? episode.start.position : trace.back().pose.position;
    double initial = 0.0;
    double remaining = 0.0;
    for (const auto& o : episode.objects) {
        initial += fields.meters(episode.goal, o.position);
        if (delivered.count(o.id)) continue;
        const Point at = held.count(o.id) ? final_pose : position.at(o.id);
        remaining += fields.meters(episode.goal, at);
    }
    r.energy = initial > 0.0 ? remaining / initial : 0.0;

    const double factor = path_efficiency_factor(r.path_length_m, r.ref_length_m);
    r.spl = r.success ? factor : 0.0;
    r.ppl = r.progress * factor;
    return r;
}

// --- Aggregation -------------------------------------------------------------

struct SuiteSummary {
    int episodes = 0;
    int errors = 0;
    double success_pct = 0.0;
    double progress_pct = 0.0;
    double spl_mean = 0.0;
    double ppl_mean = 0.0;
    double energy_mean = 0.0;
    double picked_pct = 0.0;
    double path_length_mean = 0.0;
    double steps_mean = 0.0;
};

inline SuiteSummary aggregate(const std::vector<EpisodeResult>& results) {
    SuiteSummary s;
    s.episodes = static_cast<int>(results.size());
    if (results.empty()) return s;
    for (const auto& r : results) {
        if (!r.error.empty()) {
            ++s.errors;
            continue;
        }
        s.success_pct += r.success ? 1.0 : 0.0;
        s.progress_pct += r.progress;
        s.spl_mean += r.spl;
        s.ppl_mean += r.ppl;
        s.energy_mean += r.energy;
        s.picked_pct += r.picked;
        s.path_length_mean += r.path_length_m;
        s.steps_mean += r.steps;
    }
    const double n = static_cast<double>(s.episodes - s.errors);
    if (n > 0) {
        s.success_pct = 100.0 * s.success_pct / n;
        s.progress_pct = 100.0 * s.progress_pct / n;
        s.spl_mean /= n;
        s.ppl_mean /= n;
        s.energy_mean /= n;
        s.picked_pct = 100.0 * s.picked_pct / n;
        s.path_length_mean /= n;
        s.steps_mean /= n;
    }
    return s;
}

inline std::map<std::string, SuiteSummary> aggregate_by_level(const std::vector<EpisodeResult>& results) {
    std::map<std::string, std::vector<EpisodeResult>> groups;
    for (const auto& r : results) groups[r.level_name].push_back(r);
    std::map<std::string, SuiteSummary> out;
    for (const auto& [level, rs] : groups) out[level] = aggregate(rs);
    return out;
}

inline nlohmann::json summary_to_json(const SuiteSummary& s) {
    return {
        {"energy_mean", s.energy_mean},
        {"episodes", s.episodes},
        {"errors", s.errors},
        {"path_length_mean", s.path_length_mean},
        {"picked_pct", s.picked_pct},
        {"ppl_mean", s.ppl_mean},
        {"progress_pct", s.progress_pct},
        {"spl_mean", s.spl_mean},
        {"steps_mean", s.steps_mean},
        {"success_pct", s.success_pct},
    };
}

inline const char* results_csv_header() {
    return "episode_id,scene_id,level,variant,k,success,progress,spl,ppl,energy,picked,"
           "path_length_m,ref_length_m,steps,termination,error";
}

inline std::string result_to_csv_row(const EpisodeResult& r) {
    std::ostringstream out;
    out.precision(17);
    out << r.episode_id << ',' << r.scene_id << ',' << r.level_name << ',' << r.variant << ','
        << r.target_count << ',' << (r.success ? 1 : 0) << ',' << r.progress << ',' << r.spl << ','
        << r.ppl << ',' << r.energy << ',' << r.picked << ',' << r.path_length_m << ','
        << r.ref_length_m << ',' << r.steps << ',' << to_string(r.termination) << ',' << r.error;
    return out.str();
}

inline std::string results_to_csv(const std::vector<EpisodeResult>& results) {
    std::string out = results_csv_header();
    out += '\n';
    for (const auto& r : results) {
        out += result_to_csv_row(r);
        out += '\n';
    }
    return out;
}

} // namespace longhot
