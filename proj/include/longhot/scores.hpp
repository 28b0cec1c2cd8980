#pragma once

#include "longhot/env.hpp"
#include "longhot/mapping.hpp"
#include "longhot/rng.hpp"

#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace longhot {

enum class ProviderKind { Oracle, Random, Zero };

inline ProviderKind provider_from_string(const std::string& s) {
    if (s == "oracle") return ProviderKind::Oracle;
    if (s == "random") return ProviderKind::Random;
    if (s == "zero") return ProviderKind::Zero;
    throw std::invalid_argument("unknown score provider: " + s);
}

inline const char* to_string(ProviderKind k) {
    switch (k) {
        case ProviderKind::Oracle: return "oracle";
        case ProviderKind::Random: return "random";
        case ProviderKind::Zero: return "zero";
    }
    return "?";
}

// Closeness label: 1 at the object, 0 from 5 m out.
inline double closeness_label(double distance_m) {
    return std::max(1.0 - distance_m / 5.0, 0.0);
}

// Everything a provider may look at for one step. Ground truth is only
// consumed by the oracle kind.
struct ScoreContext {
    const OccupancyGrid& world;
    FieldCache& fields;
    const EnvState& state;
    const Episode& episode;
    const ObjectIds& ids;
    const Observation& observation;
    int t = 0;
    RewardConfig rewards;
};

// Sector split of the field of view, in bearing degrees relative to the
// heading: right [-45,-15), center [-15,+15], left (+15,+45].
inline int sector_of_bearing(double bearing) {
    if (bearing >= -45.0 && bearing < -15.0) return 0;
    if (bearing >= -15.0 && bearing <= 15.0) return 1;
    if (bearing > 15.0 && bearing <= 45.0) return 2;
    return -1;
}

// Score providers are pure functions of (context, seed); the random kind
// keys its draws on (t, slot) so replays are stable.
class ScoreProvider {
public:
    explicit ScoreProvider(ProviderKind kind = ProviderKind::Oracle, uint64_t seed = 0)
        : kind_(kind), seed_(seed) {}

    ProviderKind kind() const { return kind_; }

    // Per-object closeness from the current view.
    double closeness(const ScoreContext& ctx, int object_id) const {
        switch (kind_) {
            case ProviderKind::Zero:
                return 0.0;
            case ProviderKind::Random:
                return hashed_uniform(seed_, 0x1001u, static_cast<uint64_t>(ctx.t),
                                      static_cast<uint64_t>(object_id));
            case ProviderKind::Oracle: {
                if (!ctx.observation.find(object_id)) return 0.0; // invisible
                const Point pos = object_position(ctx, object_id);
                const double d = ctx.fields.meters(pos, ctx.state.pose.position);
                if (!std::isfinite(d)) return 0.0;
                return closeness_label(d);
            }
        }
        return 0.0;
    }

    // Three exploration scores for the FOV sectors. For each sector the
    // farthest live frontier is evaluated: how much closer is it than the
    // agent to the best undiscovered object?
    std::array<double, 3> exploration(const ScoreContext& ctx, const std::vector<Frontier>& frontiers,
                                      const std::set<int>& undiscovered) const {
        std::array<double, 3> scores{0.0, 0.0, 0.0};
        switch (kind_) {
            case ProviderKind::Zero:
                return scores;
            case ProviderKind::Random:
                for (int s = 0; s < 3; ++s)
                    scores[static_cast<size_t>(s)] = hashed_uniform(
                        seed_, 0x2002u, static_cast<uint64_t>(ctx.t), static_cast<uint64_t>(s));
                return scores;
            case ProviderKind::Oracle:
                break;
        }

        // pick the farthest frontier (true geodesic from the agent) per sector
        std::array<const Frontier*, 3> farthest{nullptr, nullptr, nullptr};
        std::array<double, 3> far_dist{-1.0, -1.0, -1.0};
        for (const auto& f : frontiers) {
            const int sector = sector_of_bearing(bearing_deg(ctx.state.pose, f.centroid));
            if (sector < 0) continue;
            const Point anchor = cell_center(f.anchor, ctx.world.resolution());
            const double d = ctx.fields.meters(anchor, ctx.state.pose.position);
            if (!std::isfinite(d)) continue;
            if (d > far_dist[static_cast<size_t>(sector)]) {
                far_dist[static_cast<size_t>(sector)] = d;
                farthest[static_cast<size_t>(sector)] = &f;
            }
        }

        for (int s = 0; s < 3; ++s) {
            const Frontier* f = farthest[static_cast<size_t>(s)];
            if (!f) continue; // no frontier in this sector -> 0
            const Point anchor = cell_center(f->anchor, ctx.world.resolution());
            double best = 0.0;
            for (int id : undiscovered) {
                const Point pos = object_position(ctx, id);
                const double d_agent = ctx.fields.meters(pos, ctx.state.pose.position);
                const double d_frontier = ctx.fields.meters(pos, anchor);
                if (!std::isfinite(d_agent) || !std::isfinite(d_frontier)) continue;
                best = std::max(best, (d_agent - d_frontier) / 5.0);
            }
            scores[static_cast<size_t>(s)] = best;
        }
        return scores;
    }

private:
    static Point object_position(const ScoreContext& ctx, int object_id) {
        if (object_id == ctx.ids.goal()) return ctx.episode.goal;
        const auto it = ctx.state.in_scene.find(object_id);
        if (it != ctx.state.in_scene.end()) return it->second;
        return ctx.state.pose.position; // held: carried by the agent
    }

    ProviderKind kind_;
    uint64_t seed_;
};

} // namespace longhot
