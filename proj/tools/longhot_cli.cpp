// Benchmark CLI: scene/episode generation, suite runs across policy
// variants, parameter sweeps, trace replay, and report aggregation.

#include "longhot/longhot.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace longhot;

namespace {

// exit codes: 0 ok, 1 suite had episode errors, 2 invalid config
constexpr int kOk = 0;
constexpr int kEpisodeErrors = 1;
constexpr int kInvalidConfig = 2;

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("LONGHOT_OUT_DIR")) return env;
    return "out";
}

HtpConfig load_policy_config(const std::string& config_path, const std::string& variant,
                             double noise_p, uint64_t seed) {
    HtpConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw InvalidRunSpec("cannot open config file: " + config_path);
        nlohmann::json j = nlohmann::json::parse(in);
        cfg = policy_config_from_json(j.contains("policy") ? j.at("policy") : j);
    }
    if (!variant.empty()) cfg.variant = variant_from_string(variant);
    if (noise_p >= 0.0) cfg.nav_noise_p = noise_p;
    cfg.seed = seed;
    return cfg;
}

EnvConfig load_env_config(const std::string& config_path, bool strict) {
    EnvConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw InvalidRunSpec("cannot open config file: " + config_path);
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.contains("env")) cfg = env_config_from_json(j.at("env"));
    }
    if (strict) cfg.strict_termination = true;
    return cfg;
}

void print_summary(const std::string& tag, const SuiteSummary& s) {
    std::printf("%-24s n=%-4d err=%-3d success=%6.1f%%  progress=%6.1f%%  spl=%.3f  ppl=%.3f  "
                "energy=%.3f  picked=%5.1f%%\n",
                tag.c_str(), s.episodes, s.errors, s.success_pct, s.progress_pct, s.spl_mean,
                s.ppl_mean, s.energy_mean, s.picked_pct);
}

int cmd_gen_scenes(int count, double extent, int rooms, double corridor, double density,
                   uint64_t seed, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    SceneSpec spec;
    spec.extent_m = extent;
    spec.room_count = rooms;
    spec.corridor_width_m = corridor;
    spec.obstacle_density = density;
    for (int i = 0; i < count; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "scene_%03d", i);
        Scene scene{name, generate_scene(mix_seed(seed, static_cast<uint64_t>(i)), spec)};
        save_scene(scene, out_dir + "/" + name + ".json");
        std::printf("wrote %s/%s.json (%dx%d cells%s)\n", out_dir.c_str(), name, scene.grid.width(),
                    scene.grid.height(), scene.grid.is_large() ? ", large" : "");
    }
    return kOk;
}

int cmd_gen_episodes(const std::string& scenes_dir, const std::string& level_name, int k, int count,
                     uint64_t seed, const std::string& out_file, bool print_stats) {
    const auto scenes = load_scenes_dir(scenes_dir);
    LevelParams level = named_level(level_name);
    if (k > 0) level.target_count = k;
    const auto episodes = build_suite(scenes, level, count, seed);
    save_suite(episodes, out_file);
    std::printf("wrote %s (%zu episodes, level %s, k=%d)\n", out_file.c_str(), episodes.size(),
                level.name.c_str(), level.target_count);

    if (print_stats) {
        std::map<std::string, const OccupancyGrid*> by_id;
        for (const auto& s : scenes) by_id[s.id] = &s.grid;
        std::vector<double> refs;
        for (const auto& e : episodes) refs.push_back(reference_length(*by_id.at(e.scene_id), e));
        std::sort(refs.begin(), refs.end());
        const auto q = [&](double p) { return refs[static_cast<size_t>(p * (refs.size() - 1))]; };
        std::printf("reference path length: min=%.1f p25=%.1f median=%.1f p75=%.1f max=%.1f m\n",
                    refs.front(), q(0.25), q(0.5), q(0.75), refs.back());
        const double lo = refs.front(), hi = refs.back();
        const int bins = 10;
        std::vector<int> hist(bins, 0);
        for (double r : refs) {
            int b = hi > lo ? static_cast<int>((r - lo) / (hi - lo) * bins) : 0;
            hist[static_cast<size_t>(std::min(b, bins - 1))]++;
        }
        for (int b = 0; b < bins; ++b) {
            std::printf("%6.1f-%6.1f m |", lo + (hi - lo) * b / bins,
                        lo + (hi - lo) * (b + 1) / bins);
            for (int j = 0; j < hist[static_cast<size_t>(b)]; ++j) std::putchar('#');
            std::printf(" %d\n", hist[static_cast<size_t>(b)]);
        }
    }
    return kOk;
}

int cmd_run(const RunSpec& spec) {
    const auto scenes = load_scenes_dir(spec.scenes_dir);
    const auto episodes = load_suite(spec.suite_path);

    const auto start = std::chrono::steady_clock::now();
    std::vector<std::vector<TraceRecord>> traces;
    const SuiteReport report = run_suite(scenes, episodes, spec.env, spec.policy, spec.seed,
                                         spec.parallelism, spec.write_traces ? &traces : nullptr);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    write_report(report, spec.out_dir);
    if (spec.write_traces) write_traces(traces, episodes, spec.out_dir);

    print_summary(to_string(spec.policy.variant), report.summary);
    std::fprintf(stderr, "suite finished in %.1f s (parallelism %d); reports in %s\n", secs,
                 spec.parallelism, spec.out_dir.c_str());
    return report.summary.errors > 0 ? kEpisodeErrors : kOk;
}

int cmd_replay(const std::string& trace_path, const std::string& suite_path, int episode_id,
               const std::string& scenes_dir, bool strict) {
    const auto episodes = load_suite(suite_path);
    const Episode* episode = nullptr;
    for (const auto& e : episodes)
        if (e.id == episode_id) episode = &e;
    if (!episode) throw InvalidRunSpec("episode id not in suite: " + std::to_string(episode_id));

    const auto scenes = load_scenes_dir(scenes_dir);
    const OccupancyGrid* grid = nullptr;
    for (const auto& s : scenes)
        if (s.id == episode->scene_id) grid = &s.grid;
    if (!grid) throw InvalidRunSpec("scene not found: " + episode->scene_id);

    EnvConfig env_cfg;
    env_cfg.strict_termination = strict;
    const auto trace = load_trace(trace_path);
    const ReplayVerdict verdict = replay_trace(*grid, *episode, trace, env_cfg);
    if (verdict.ok) {
        std::printf("PASS: %zu steps replayed state-for-state\n", trace.size());
        return kOk;
    }
    std::printf("FAIL at step %d: %s\n", verdict.divergence_step, verdict.message.c_str());
    return kEpisodeErrors;
}

int cmd_sweep(const std::string& axis, const std::vector<std::string>& values,
              const std::string& scenes_dir, const std::string& level_name, int k, int count,
              uint64_t seed, const std::string& variant, int parallelism,
              const std::string& out_dir) {
    const auto scenes = load_scenes_dir(scenes_dir);
    std::vector<SweepRow> rows;
    bool any_errors = false;

    const auto run_one = [&](const std::string& value, const std::vector<Episode>& episodes,
                             const HtpConfig& policy, const EnvConfig& env_cfg) {
        const SuiteReport report = run_suite(scenes, episodes, env_cfg, policy, seed, parallelism);
        rows.push_back({axis, value, to_string(policy.variant), report.summary});
        any_errors |= report.summary.errors > 0;
        print_summary(axis + "=" + value + " " + to_string(policy.variant), report.summary);
    };

    HtpConfig base_policy;
    base_policy.variant = variant_from_string(variant);
    EnvConfig base_env;
    LevelParams level = named_level(level_name);
    if (k > 0) level.target_count = k;

    if (axis == "k") {
        for (const auto& v : values) {
            LevelParams l = level;
            l.target_count = std::stoi(v);
            run_one(v, build_suite(scenes, l, count, seed), base_policy, base_env);
        }
    } else if (axis == "level") {
        for (const auto& v : values) {
            LevelParams l = named_level(v);
            if (k > 0) l.target_count = k;
            run_one(v, build_suite(scenes, l, count, seed), base_policy, base_env);
        }
    } else if (axis == "variant") {
        const auto episodes = build_suite(scenes, level, count, seed);
        for (const auto& v : values) {
            HtpConfig p = base_policy;
            p.variant = variant_from_string(v);
            run_one(v, episodes, p, base_env);
        }
    } else if (axis == "noise_p") {
        const auto episodes = build_suite(scenes, level, count, seed);
        for (const auto& v : values) {
            HtpConfig p = base_policy;
            p.nav_noise_p = std::stod(v);
            run_one(v, episodes, p, base_env);
        }
    } else {
        throw InvalidRunSpec("unknown sweep axis: " + axis);
    }

    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir + "/sweep.csv", std::ios::binary);
    csv << sweep_to_csv(rows);
    std::fprintf(stderr, "sweep rows in %s/sweep.csv\n", out_dir.c_str());
    return any_errors ? kEpisodeErrors : kOk;
}

int cmd_report(const std::vector<std::string>& csv_paths) {
    for (const auto& path : csv_paths) {
        std::ifstream in(path);
        if (!in) throw InvalidRunSpec("cannot open " + path);
        std::string line;
        std::getline(in, line); // header
        std::vector<EpisodeResult> results;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cols;
            size_t pos = 0;
            while (pos <= line.size()) {
                const size_t comma = line.find(',', pos);
                cols.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            if (cols.size() < 15) continue;
            EpisodeResult r;
            r.level_name = cols[2];
            r.variant = cols[3];
            r.success = cols[5] == "1";
            r.progress = std::stod(cols[6]);
            r.spl = std::stod(cols[7]);
            r.ppl = std::stod(cols[8]);
            r.energy = std::stod(cols[9]);
            r.picked = std::stod(cols[10]);
            r.path_length_m = std::stod(cols[11]);
            r.steps = std::stoi(cols[13]);
            if (cols.size() > 15) r.error = cols[15];
            results.push_back(std::move(r));
        }
        print_summary(std::filesystem::path(path).stem().string(), aggregate(results));
        for (const auto& [level, summary] : aggregate_by_level(results))
            print_summary("  level " + level, summary);
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-object transport benchmark: scenes, episodes, policy runs"};
    app.require_subcommand(1);

    // gen-scenes
    auto* gen_scenes = app.add_subcommand("gen-scenes", "generate occupancy-grid scenes");
    int gs_count = 5, gs_rooms = 6;
    double gs_extent = 30.0, gs_corridor = 1.0, gs_density = 0.02;
    uint64_t gs_seed = 1;
    std::string gs_out;
    gen_scenes->add_option("--count", gs_count, "number of scenes");
    gen_scenes->add_option("--extent", gs_extent, "metric side length");
    gen_scenes->add_option("--rooms", gs_rooms, "rooms per scene");
    gen_scenes->add_option("--corridor-width", gs_corridor, "corridor width in meters");
    gen_scenes->add_option("--density", gs_density, "obstacle clutter fraction");
    gen_scenes->add_option("--seed", gs_seed, "base seed");
    gen_scenes->add_option("--out-dir", gs_out, "output directory");

    // gen-episodes
    auto* gen_episodes = app.add_subcommand("gen-episodes", "sample a task suite over scenes");
    std::string ge_scenes, ge_level = "default", ge_out = "episodes.json";
    int ge_k = 0, ge_count = 100;
    uint64_t ge_seed = 1;
    bool ge_stats = false;
    gen_episodes->add_option("--scenes", ge_scenes, "scene directory")->required();
    gen_episodes->add_option("--level", ge_level, "default | hard | harder");
    gen_episodes->add_option("--k", ge_k, "override target count");
    gen_episodes->add_option("--count", ge_count, "episodes to sample");
    gen_episodes->add_option("--seed", ge_seed, "suite seed");
    gen_episodes->add_option("--out", ge_out, "output suite file");
    gen_episodes->add_flag("--print-stats", ge_stats, "print reference-length histogram");

    // run
    auto* run = app.add_subcommand("run", "run a policy over a suite");
    std::string r_suite, r_scenes, r_variant = "full", r_config, r_out;
    uint64_t r_seed = 1;
    int r_parallel = 1;
    bool r_strict = false, r_no_traces = false;
    double r_noise = -1.0;
    run->add_option("--suite", r_suite, "episode suite file")->required();
    run->add_option("--scenes", r_scenes, "scene directory")->required();
    run->add_option("--variant", r_variant,
                    "full | no_graph | rand_closeness | rand_explore | nearest_frontier | "
                    "greedy_pickup");
    run->add_option("--config", r_config, "JSON config file ({env:{...}, policy:{...}})");
    run->add_option("--seed", r_seed, "run seed");
    run->add_option("--parallel", r_parallel, "worker threads");
    run->add_option("--noise-p", r_noise, "object-nav random action probability");
    run->add_option("--out-dir", r_out, "output directory (or $LONGHOT_OUT_DIR)");
    run->add_flag("--strict-termination", r_strict, "end episodes on an empty pickup");
    run->add_flag("--no-traces", r_no_traces, "skip writing JSONL traces");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a suite across an axis of settings");
    std::string s_axis, s_scenes, s_level = "default", s_variant = "full", s_out;
    std::vector<std::string> s_values;
    int s_k = 0, s_count = 100, s_parallel = 1;
    uint64_t s_seed = 1;
    sweep->add_option("--axis", s_axis, "k | level | variant | noise_p")->required();
    sweep->add_option("--values", s_values, "axis values")->required()->expected(-1);
    sweep->add_option("--scenes", s_scenes, "scene directory")->required();
    sweep->add_option("--level", s_level, "base level");
    sweep->add_option("--k", s_k, "base target count override");
    sweep->add_option("--count", s_count, "episodes per point");
    sweep->add_option("--seed", s_seed, "suite seed");
    sweep->add_option("--variant", s_variant, "base policy variant");
    sweep->add_option("--parallel", s_parallel, "worker threads");
    sweep->add_option("--out-dir", s_out, "output directory (or $LONGHOT_OUT_DIR)");

    // replay
    auto* replay = app.add_subcommand("replay", "verify a trace against the simulator");
    std::string p_trace, p_suite, p_scenes;
    int p_episode = 0;
    bool p_strict = false;
    replay->add_option("--trace", p_trace, "JSONL trace file")->required();
    replay->add_option("--suite", p_suite, "episode suite file")->required();
    replay->add_option("--episode", p_episode, "episode id within the suite")->required();
    replay->add_option("--scenes", p_scenes, "scene directory")->required();
    replay->add_flag("--strict-termination", p_strict, "replay under strict termination");

    // report
    auto* report = app.add_subcommand("report", "aggregate per-episode CSV reports");
    std::vector<std::string> rp_paths;
    report->add_option("paths", rp_paths, "report.csv files")->required()->expected(-1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_scenes->parsed())
            return cmd_gen_scenes(gs_count, gs_extent, gs_rooms, gs_corridor, gs_density, gs_seed,
                                  resolve_out_dir(gs_out));
        if (gen_episodes->parsed())
            return cmd_gen_episodes(ge_scenes, ge_level, ge_k, ge_count, ge_seed, ge_out, ge_stats);
        if (run->parsed()) {
            RunSpec spec;
            spec.suite_path = r_suite;
            spec.scenes_dir = r_scenes;
            spec.policy = load_policy_config(r_config, r_variant, r_noise, r_seed);
            spec.env = load_env_config(r_config, r_strict);
            spec.seed = r_seed;
            spec.parallelism = r_parallel;
            spec.out_dir = resolve_out_dir(r_out);
            spec.write_traces = !r_no_traces;
            return cmd_run(spec);
        }
        if (sweep->parsed())
            return cmd_sweep(s_axis, s_values, s_scenes, s_level, s_k, s_count, s_seed, s_variant,
                             s_parallel, resolve_out_dir(s_out));
        if (replay->parsed()) return cmd_replay(p_trace, p_suite, p_episode, p_scenes, p_strict);
        if (report->parsed()) return cmd_report(rp_paths);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInvalidConfig;
    }
    return kOk;
}
