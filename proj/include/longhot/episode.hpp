#pragma once

#include "longhot/distance.hpp"
#include "longhot/grid.hpp"
#include "longhot/rng.hpp"
#include "longhot/scene_io.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace longhot {

struct InfeasibleLevel : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Task difficulty knobs. All distances are geodesic meters.
struct LevelParams {
    std::string name = "default";
    double goal_range_min = 2.0;
    double goal_range_max = 15.0;
    double obj_dist_min = 2.0;
    double obj_dist_max = 12.0;
    int target_count = 4; // K

    void validate() const {
        if (goal_range_min < 0.0 || goal_range_min >= goal_range_max)
            throw InfeasibleLevel("level: goal range must satisfy 0 <= min < max");
        if (obj_dist_min < 0.0 || obj_dist_min > obj_dist_max)
            throw InfeasibleLevel("level: object distances must satisfy 0 <= min <= max");
        if (target_count < 1) throw InfeasibleLevel("level: need at least one target");
    }
};

// Difficulty axis: larger goal ranges mean more exploration and longer
// horizons. hard/harder are meant for large (>40 m) scenes.
inline LevelParams named_level(const std::string& name) {
    LevelParams level;
    level.name = name;
    if (name == "default") {
        level.goal_range_max = 15.0;
    } else if (name == "hard") {
        level.goal_range_max = 25.0;
    } else if (name == "harder") {
        level.goal_range_max = 35.0;
    } else {
        throw InfeasibleLevel("unknown level name: " + name);
    }
    return level;
}

struct PlacedObject {
    int id = 0;
    int color = 0;
    Point position;
};

struct Episode {
    int id = 0;
    std::string scene_id;
    uint64_t seed = 0;
    LevelParams level;
    Point goal;
    std::vector<PlacedObject> objects;
    Point container;
    Pose start;

    int target_count() const { return static_cast<int>(objects.size()); }
};

namespace detail {

// Draw a cell index from a candidate list, counting against the attempt cap.
inline int draw_cell(Rng& rng, const std::vector<int>& candidates, int& budget) {
    if (budget <= 0) throw InfeasibleLevel("placement attempt budget exhausted");
    --budget;
    return candidates[rng.next_below(candidates.size())];
}

} // namespace detail

// Sample one task instance: goal first, then objects, then container, then
// the start pose, mirroring the task construction order. Deterministic in
// (grid, level, seed); every stage draws from its own derived stream so a
// level with more targets extends a smaller one on identical geometry.
inline Episode sample_episode(const OccupancyGrid& grid, const LevelParams& level, uint64_t seed) {
    level.validate();
    const std::vector<int> free_cells = grid.free_cell_indices();
    const int needed = level.target_count + 3; // goal + container + start
    if (static_cast<int>(free_cells.size()) < needed)
        throw InfeasibleLevel("scene has too few free cells for the level");

    int budget = 10000;
    for (int attempt = 0;; ++attempt) {
        const uint64_t attempt_seed = mix_seed(seed, static_cast<uint64_t>(attempt));
        Rng goal_rng(mix_seed(attempt_seed, 1));
        Rng object_rng(mix_seed(attempt_seed, 2));
        Rng container_rng(mix_seed(attempt_seed, 3));
        Rng start_rng(mix_seed(attempt_seed, 4));

        try {
            Episode episode;
            episode.seed = seed;
            episode.level = level;

            const CellIndex goal_cell = grid.cell_at(detail::draw_cell(goal_rng, free_cells, budget));
            episode.goal = grid.center_of(goal_cell);
            const DistanceField goal_field(grid, episode.goal);

            std::vector<int> band;
            for (int idx : free_cells) {
                const double d = goal_field.meters_at(grid.cell_at(idx));
                if (d >= level.goal_range_min && d <= level.goal_range_max) band.push_back(idx);
            }
            if (static_cast<int>(band.size()) < needed - 1) continue;

            auto taken = [&](int idx) {
                if (idx == grid.index(goal_cell)) return true;
                for (const auto& o : episode.objects)
                    if (idx == grid.index(grid.cell_of_point(o.position))) return true;
                return false;
            };

            std::vector<DistanceField> object_fields;
            for (int i = 0; i < level.target_count; ++i) {
                bool placed = false;
                for (int tries = 0; tries < 200 && !placed; ++tries) {
                    const int idx = detail::draw_cell(object_rng, band, budget);
                    if (taken(idx)) continue;
                    const CellIndex c = grid.cell_at(idx);
                    bool ok = true;
                    bool near_one = episode.objects.empty();
                    for (const auto& f : object_fields) {
                        const double d = f.meters_at(c);
                        if (d < level.obj_dist_min) { ok = false; break; }
                        if (d <= level.obj_dist_max) near_one = true;
                    }
                    if (!ok || !near_one) continue;
                    episode.objects.push_back({i, i, grid.center_of(c)});
                    object_fields.emplace_back(grid, grid.center_of(c));
                    placed = true;
                }
                if (!placed) throw InfeasibleLevel("object placement failed");
            }

            bool have_container = false;
            for (int tries = 0; tries < 200 && !have_container; ++tries) {
                const int idx = detail::draw_cell(container_rng, band, budget);
                if (taken(idx)) continue;
                episode.container = grid.center_of(grid.cell_at(idx));
                have_container = true;
            }
            if (!have_container) throw InfeasibleLevel("container placement failed");

            bool have_start = false;
            for (int tries = 0; tries < 200 && !have_start; ++tries) {
                const int idx = detail::draw_cell(start_rng, band, budget);
                if (taken(idx) || idx == grid.index(grid.cell_of_point(episode.container))) continue;
                episode.start.position = grid.center_of(grid.cell_at(idx));
                episode.start.heading_deg = kTurnDeg * static_cast<int>(start_rng.next_below(kDirections));
                have_start = true;
            }
            if (!have_start) throw InfeasibleLevel("start placement failed");

            return episode;
        } catch (const InfeasibleLevel&) {
            if (budget <= 0)
                throw InfeasibleLevel("no feasible placement within attempt budget (level '" +
                                      level.name + "')");
        }
    }
}

// Episodes round-robin over scenes; per-episode seeds derive from the suite
// seed, so the suite is a pure function of (scenes, level, count, seed).
inline std::vector<Episode> build_suite(const std::vector<Scene>& scenes, const LevelParams& level,
                                        int count, uint64_t seed) {
    if (scenes.empty()) throw InfeasibleLevel("suite needs at least one scene");
    if (count < 1) throw InfeasibleLevel("suite needs at least one episode");
    std::vector<Episode> episodes;
    episodes.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        const Scene& scene = scenes[static_cast<size_t>(i) % scenes.size()];
        try {
            Episode e = sample_episode(scene.grid, level, mix_seed(seed, static_cast<uint64_t>(i)));
            e.id = i;
            e.scene_id = scene.id;
            episodes.push_back(std::move(e));
        } catch (const InfeasibleLevel& err) {
            throw InfeasibleLevel("scene '" + scene.id + "': " + err.what());
        }
    }
    return episodes;
}

// --- JSON ------------------------------------------------------------------

inline nlohmann::json level_to_json(const LevelParams& level) {
    return {
        {"goal_range_max", level.goal_range_max},
        {"goal_range_min", level.goal_range_min},
        {"k", level.target_count},
        {"name", level.name},
        {"obj_dist_max", level.obj_dist_max},
        {"obj_dist_min", level.obj_dist_min},
    };
}

inline LevelParams level_from_json(const nlohmann::json& j) {
    LevelParams level;
    level.name = j.value("name", "custom");
    level.goal_range_min = j.at("goal_range_min").get<double>();
    level.goal_range_max = j.at("goal_range_max").get<double>();
    level.obj_dist_min = j.at("obj_dist_min").get<double>();
    level.obj_dist_max = j.at("obj_dist_max").get<double>();
    level.target_count = j.at("k").get<int>();
    return level;
}

inline nlohmann::json episode_to_json(const Episode& e) {
    nlohmann::json objects = nlohmann::json::array();
    for (const auto& o : e.objects)
        objects.push_back({{"color", o.color}, {"id", o.id}, {"x", o.position.x}, {"y", o.position.y}});
    return {
        {"container", {{"x", e.container.x}, {"y", e.container.y}}},
        {"goal", {{"x", e.goal.x}, {"y", e.goal.y}}},
        {"id", e.id},
        {"level", level_to_json(e.level)},
        {"objects", objects},
        {"scene_id", e.scene_id},
        {"seed", e.seed},
        {"start", {{"heading", e.start.heading_deg}, {"x", e.start.position.x}, {"y", e.start.position.y}}},
    };
}

inline Episode episode_from_json(const nlohmann::json& j) {
    Episode e;
    e.id = j.at("id").get<int>();
    e.scene_id = j.at("scene_id").get<std::string>();
    e.seed = j.at("seed").get<uint64_t>();
    e.level = level_from_json(j.at("level"));
    e.goal = {j.at("goal").at("x").get<double>(), j.at("goal").at("y").get<double>()};
    e.container = {j.at("container").at("x").get<double>(), j.at("container").at("y").get<double>()};
    e.start.position = {j.at("start").at("x").get<double>(), j.at("start").at("y").get<double>()};
    e.start.heading_deg = j.at("start").at("heading").get<int>();
    for (const auto& jo : j.at("objects"))
        e.objects.push_back({jo.at("id").get<int>(), jo.at("color").get<int>(),
                             {jo.at("x").get<double>(), jo.at("y").get<double>()}});
    return e;
}

inline std::string suite_to_json(const std::vector<Episode>& episodes) {
    nlohmann::json j;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : episodes) arr.push_back(episode_to_json(e));
    j["episodes"] = arr;
    j["format"] = "longhot-episodes";
    j["version"] = 1;
    return j.dump(2) + "\n";
}

inline std::vector<Episode> suite_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "longhot-episodes")
        throw InfeasibleLevel("not a longhot-episodes file");
    std::vector<Episode> episodes;
    for (const auto& je : j.at("episodes")) episodes.push_back(episode_from_json(je));
    return episodes;
}

inline void save_suite(const std::vector<Episode>& episodes, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InfeasibleLevel("cannot open for write: " + path);
    out << suite_to_json(episodes);
}

inline std::vector<Episode> load_suite(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InfeasibleLevel("cannot open suite file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return suite_from_json(text);
}

} // namespace longhot
