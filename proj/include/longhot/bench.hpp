#pragma once

#include "longhot/metrics.hpp"
#include "longhot/policy.hpp"
#include "longhot/scene_io.hpp"

#include "json.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

namespace longhot {

inline constexpr const char* kVersion = "0.1.0";

struct InvalidRunSpec : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunSpec {
    std::string suite_path;
    std::string scenes_dir;
    EnvConfig env;
    HtpConfig policy;
    uint64_t seed = 0;
    int parallelism = 1;
    std::string out_dir;
    bool write_traces = true;
};

// --- config (de)serialization -------------------------------------------------

inline nlohmann::json env_config_to_json(const EnvConfig& c) {
    return {
        {"fov_deg", c.fov_deg},
        {"interact_range", c.interact_range},
        {"max_steps", c.max_steps},
        {"rewards",
         {{"explore_found", c.rewards.explore_found},
          {"explore_slack", c.rewards.explore_slack},
          {"explore_success", c.rewards.explore_success},
          {"found_distance", c.rewards.found_distance},
          {"nav_collision", c.rewards.nav_collision},
          {"nav_reached", c.rewards.nav_reached},
          {"nav_slack", c.rewards.nav_slack},
          {"reach_threshold", c.rewards.reach_threshold}}},
        {"sensor_range", c.sensor_range},
        {"step_m", c.step_m},
        {"strict_termination", c.strict_termination},
    };
}

inline EnvConfig env_config_from_json(const nlohmann::json& j) {
    EnvConfig c;
    c.max_steps = j.value("max_steps", c.max_steps);
    c.interact_range = j.value("interact_range", c.interact_range);
    c.sensor_range = j.value("sensor_range", c.sensor_range);
    c.fov_deg = j.value("fov_deg", c.fov_deg);
    c.step_m = j.value("step_m", c.step_m);
    c.strict_termination = j.value("strict_termination", c.strict_termination);
    if (j.contains("rewards")) {
        const auto& r = j.at("rewards");
        c.rewards.explore_found = r.value("explore_found", c.rewards.explore_found);
        c.rewards.explore_success = r.value("explore_success", c.rewards.explore_success);
        c.rewards.explore_slack = r.value("explore_slack", c.rewards.explore_slack);
        c.rewards.nav_reached = r.value("nav_reached", c.rewards.nav_reached);
        c.rewards.nav_slack = r.value("nav_slack", c.rewards.nav_slack);
        c.rewards.nav_collision = r.value("nav_collision", c.rewards.nav_collision);
        c.rewards.reach_threshold = r.value("reach_threshold", c.rewards.reach_threshold);
        c.rewards.found_distance = r.value("found_distance", c.rewards.found_distance);
    }
    return c;
}

inline nlohmann::json policy_config_to_json(const HtpConfig& c) {
    return {
        {"closeness_provider", c.closeness_provider},
        {"container_first", c.container_first},
        {"discover_threshold", c.discover_threshold},
        {"exploration_provider", c.exploration_provider},
        {"greedy_trigger", c.greedy_trigger},
        {"nav_noise_p", c.nav_noise_p},
        {"subtask_step_limit", c.subtask_step_limit},
        {"trigger_threshold", c.trigger_threshold},
        {"variant", to_string(c.variant)},
    };
}

inline HtpConfig policy_config_from_json(const nlohmann::json& j) {
    HtpConfig c;
    if (j.contains("variant")) c.variant = variant_from_string(j.at("variant").get<std::string>());
    c.trigger_threshold = j.value("trigger_threshold", c.trigger_threshold);
    c.discover_threshold = j.value("discover_threshold", c.discover_threshold);
    c.greedy_trigger = j.value("greedy_trigger", c.greedy_trigger);
    c.subtask_step_limit = j.value("subtask_step_limit", c.subtask_step_limit);
    c.nav_noise_p = j.value("nav_noise_p", c.nav_noise_p);
    c.container_first = j.value("container_first", c.container_first);
    c.closeness_provider = j.value("closeness_provider", c.closeness_provider);
    c.exploration_provider = j.value("exploration_provider", c.exploration_provider);
    return c;
}

// FNV-1a over the canonical config dump; stable across runs and platforms.
inline std::string config_hash(const EnvConfig& env, const HtpConfig& policy, uint64_t seed) {
    nlohmann::json j{{"env", env_config_to_json(env)},
                     {"policy", policy_config_to_json(policy)},
                     {"seed", seed}};
    const std::string text = j.dump();
    uint64_t h = 1469598103934665603ull;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// --- suite running -------------------------------------------------------------

inline std::vector<Scene> load_scenes_dir(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".json") paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    std::vector<Scene> scenes;
    for (const auto& p : paths) scenes.push_back(load_scene(p));
    if (scenes.empty()) throw InvalidRunSpec("no scene files in " + dir);
    return scenes;
}

struct SuiteReport {
    std::vector<EpisodeResult> rows; // ordered by suite position
    SuiteSummary summary;
    std::map<std::string, SuiteSummary> per_level;
    std::string hash;
    uint64_t seed = 0;
    std::string version = kVersion;
};

// Run every episode through the policy, distributing over a worker pool.
// Per-episode seeds derive from (seed, episode id), so the report rows are
// identical for any parallelism and any scheduling order.
inline SuiteReport run_suite(const std::vector<Scene>& scenes, const std::vector<Episode>& episodes,
                             const EnvConfig& env_cfg, const HtpConfig& policy_cfg, uint64_t seed,
                             int parallelism,
                             std::vector<std::vector<TraceRecord>>* traces_out = nullptr) {
    if (parallelism < 1) throw InvalidRunSpec("parallelism must be >= 1");
    std::map<std::string, const OccupancyGrid*> by_id;
    for (const auto& s : scenes) by_id[s.id] = &s.grid;

    std::vector<EpisodeResult> rows(episodes.size());
    std::vector<std::vector<TraceRecord>> traces(episodes.size());

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= episodes.size()) return;
            const Episode& episode = episodes[i];
            try {
                const auto it = by_id.find(episode.scene_id);
                if (it == by_id.end())
                    throw InvalidRunSpec("unknown scene id: " + episode.scene_id);
                HtpConfig cfg = policy_cfg;
                cfg.seed = mix_seed(seed, static_cast<uint64_t>(episode.id));
                EpisodeRunOutcome out = run_episode(*it->second, episode, env_cfg, cfg);
                rows[i] = std::move(out.result);
                traces[i] = std::move(out.trace);
            } catch (const std::exception& e) {
                EpisodeResult err;
                err.episode_id = episode.id;
                err.scene_id = episode.scene_id;
                err.level_name = episode.level.name;
                err.target_count = episode.target_count();
                err.variant = to_string(policy_cfg.variant);
                err.error = e.what();
                rows[i] = std::move(err);
            }
        }
    };

    std::vector<std::thread> pool;
    const int threads = std::min<int>(parallelism, static_cast<int>(episodes.size()));
    for (int k = 0; k < std::max(1, threads); ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    SuiteReport report;
    report.rows = std::move(rows);
    report.summary = aggregate(report.rows);
    report.per_level = aggregate_by_level(report.rows);
    report.seed = seed;
    report.hash = config_hash(env_cfg, policy_cfg, seed);
    if (traces_out) *traces_out = std::move(traces);
    return report;
}

inline nlohmann::json report_to_json(const SuiteReport& report) {
    nlohmann::json per_level;
    for (const auto& [level, summary] : report.per_level) per_level[level] = summary_to_json(summary);
    return {
        {"config_hash", report.hash},
        {"per_level", per_level},
        {"seed", report.seed},
        {"summary", summary_to_json(report.summary)},
        {"version", report.version},
    };
}

inline void write_report(const SuiteReport& report, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream csv(out_dir + "/report.csv", std::ios::binary);
        if (!csv) throw InvalidRunSpec("cannot write report.csv in " + out_dir);
        csv << results_to_csv(report.rows);
    }
    {
        std::ofstream js(out_dir + "/report.json", std::ios::binary);
        if (!js) throw InvalidRunSpec("cannot write report.json in " + out_dir);
        js << report_to_json(report).dump(2) << "\n";
    }
}

inline void write_traces(const std::vector<std::vector<TraceRecord>>& traces,
                         const std::vector<Episode>& episodes, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir + "/traces");
    for (size_t i = 0; i < traces.size(); ++i) {
        if (traces[i].empty()) continue;
        char name[64];
        std::snprintf(name, sizeof name, "/traces/episode_%05d.jsonl", episodes[i].id);
        save_trace(traces[i], out_dir + name);
    }
}

// --- replay --------------------------------------------------------------------

struct ReplayVerdict {
    bool ok = true;
    int divergence_step = -1;
    std::string message;
};

// Re-execute the recorded actions and compare the env state step by step.
inline ReplayVerdict replay_trace(const OccupancyGrid& grid, const Episode& episode,
                                  const std::vector<TraceRecord>& trace, const EnvConfig& env_cfg = {}) {
    EnvSim env(grid, episode, env_cfg);
    for (size_t i = 0; i < trace.size(); ++i) {
        const TraceRecord& rec = trace[i];
        StepResult result;
        try {
            result = env.step(rec.action);
        } catch (const std::exception& e) {
            return {false, static_cast<int>(i), e.what()};
        }
        const EnvState& s = env.state();
        const auto fail = [&](const std::string& what) {
            return ReplayVerdict{false, static_cast<int>(i), what};
        };
        if (s.pose.position.x != rec.pose.position.x || s.pose.position.y != rec.pose.position.y)
            return fail("position mismatch");
        if (s.pose.heading_deg != rec.pose.heading_deg) return fail("heading mismatch");
        if (s.hand.holds_container != rec.holds_container) return fail("container state mismatch");
        if (std::vector<int>(s.hand.held_targets.begin(), s.hand.held_targets.end()) != rec.held)
            return fail("held set mismatch");
        if (std::vector<int>(s.goal_state.delivered.begin(), s.goal_state.delivered.end()) !=
            rec.delivered)
            return fail("delivered set mismatch");
        if (s.collided_last != rec.collided) return fail("collision flag mismatch");
        if (result.done != rec.done) return fail("done flag mismatch");
        if (result.reason != rec.reason) return fail("termination reason mismatch");
    }
    return {};
}

// --- sweep ---------------------------------------------------------------------

struct SweepRow {
    std::string axis;
    std::string value;
    std::string variant;
    SuiteSummary summary;
};

inline std::string sweep_csv_header() {
    return "axis,value,variant,episodes,errors,success_pct,progress_pct,spl_mean,ppl_mean,"
           "energy_mean,picked_pct,path_length_mean,steps_mean";
}

inline std::string sweep_row_to_csv(const SweepRow& r) {
    std::ostringstream out;
    out.precision(17);
    out << r.axis << ',' << r.value << ',' << r.variant << ',' << r.summary.episodes << ','
        << r.summary.errors << ',' << r.summary.success_pct << ',' << r.summary.progress_pct << ','
        << r.summary.spl_mean << ',' << r.summary.ppl_mean << ',' << r.summary.energy_mean << ','
        << r.summary.picked_pct << ',' << r.summary.path_length_mean << ',' << r.summary.steps_mean;
    return out.str();
}

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = sweep_csv_header();
    out += '\n';
    for (const auto& r : rows) {
        out += sweep_row_to_csv(r);
        out += '\n';
    }
    return out;
}

} // namespace longhot
