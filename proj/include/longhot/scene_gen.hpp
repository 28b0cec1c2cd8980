#pragma once

#include "longhot/distance.hpp"
#include "longhot/grid.hpp"
#include "longhot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace longhot {

struct GenerationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SceneSpec {
    double extent_m = 30.0;
    int room_count = 6;
    double corridor_width_m = 1.0;
    double obstacle_density = 0.02;
    double resolution = 0.25;
};

namespace detail {

struct RoomRect {
    int x, y, w, h;
    int cx() const { return x + w / 2; }
    int cy() const { return y + h / 2; }
    bool overlaps(const RoomRect& o, int margin) const {
        return x - margin < o.x + o.w && o.x - margin < x + w &&
               y - margin < o.y + o.h && o.y - margin < y + h;
    }
};

inline void carve_rect(OccupancyGrid& grid, int x0, int y0, int x1, int y1) {
    for (int y = std::max(1, y0); y <= std::min(grid.height() - 2, y1); ++y)
        for (int x = std::max(1, x0); x <= std::min(grid.width() - 2, x1); ++x)
            grid.set({x, y}, Cell::Free);
}

// One carve-from-solid attempt: rooms, L-shaped corridors between
// consecutive room centers, then obstacle clutter inside rooms.
inline OccupancyGrid generate_scene_attempt(Rng& rng, const SceneSpec& spec, int side) {
    OccupancyGrid grid(side, side, spec.resolution, Cell::Obstacle);

    const int corridor = std::max(1, static_cast<int>(std::lround(spec.corridor_width_m / spec.resolution)));
    const int min_room = std::max(corridor + 2, static_cast<int>(std::lround(3.0 / spec.resolution)));
    const int max_room = std::max(min_room + 1, side / 3);

    std::vector<RoomRect> rooms;
    for (int placement = 0; placement < spec.room_count; ++placement) {
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            RoomRect r;
            r.w = static_cast<int>(rng.next_int(min_room, max_room));
            r.h = static_cast<int>(rng.next_int(min_room, max_room));
            if (r.w >= side - 2 || r.h >= side - 2) continue;
            r.x = static_cast<int>(rng.next_int(1, side - 1 - r.w));
            r.y = static_cast<int>(rng.next_int(1, side - 1 - r.h));
            placed = std::none_of(rooms.begin(), rooms.end(),
                                  [&](const RoomRect& o) { return r.overlaps(o, 1); });
            if (placed) rooms.push_back(r);
        }
    }
    if (rooms.empty()) return grid; // stays disconnected; caller retries

    for (const auto& r : rooms)
        carve_rect(grid, r.x, r.y, r.x + r.w - 1, r.y + r.h - 1);

    // Corridors between consecutive rooms, plus one extra loop edge when
    // there are enough rooms to make the layout less tree-like.
    auto carve_corridor = [&](const RoomRect& a, const RoomRect& b) {
        const int half = corridor / 2;
        const int x0 = a.cx(), y0 = a.cy(), x1 = b.cx(), y1 = b.cy();
        if (rng.next_below(2) == 0) {
            carve_rect(grid, std::min(x0, x1) - half, y0 - half, std::max(x0, x1) + half, y0 + half);
            carve_rect(grid, x1 - half, std::min(y0, y1) - half, x1 + half, std::max(y0, y1) + half);
        } else {
            carve_rect(grid, x0 - half, std::min(y0, y1) - half, x0 + half, std::max(y0, y1) + half);
            carve_rect(grid, std::min(x0, x1) - half, y1 - half, std::max(x0, x1) + half, y1 + half);
        }
    };
    for (size_t i = 1; i < rooms.size(); ++i)
        carve_corridor(rooms[i - 1], rooms[i]);
    if (rooms.size() > 3)
        carve_corridor(rooms.back(), rooms.front());

    // Obstacle clutter: small blocks dropped inside rooms.
    if (spec.obstacle_density > 0.0) {
        int free_cells = 0;
        for (const auto c : grid.cells())
            if (c == Cell::Free) ++free_cells;
        const int clutter_cells = static_cast<int>(free_cells * spec.obstacle_density);
        int placed = 0;
        int attempts = 0;
        while (placed < clutter_cells && attempts < clutter_cells * 8) {
            ++attempts;
            const auto& room = rooms[rng.next_below(rooms.size())];
            if (room.w <= 4 || room.h <= 4) continue;
            const int bw = static_cast<int>(rng.next_int(1, 2));
            const int bh = static_cast<int>(rng.next_int(1, 2));
            const int bx = static_cast<int>(rng.next_int(room.x + 1, room.x + room.w - 1 - bw));
            const int by = static_cast<int>(rng.next_int(room.y + 1, room.y + room.h - 1 - bh));
            for (int y = by; y < by + bh; ++y)
                for (int x = bx; x < bx + bw; ++x) {
                    grid.set({x, y}, Cell::Obstacle);
                    ++placed;
                }
        }
    }

    grid.close_boundary();
    return grid;
}

} // namespace detail

// Deterministic rooms-and-corridors layout; retries with derived seeds until
// the free region is a single connected component.
inline OccupancyGrid generate_scene(uint64_t seed, const SceneSpec& spec) {
    if (spec.extent_m < 10.0) throw GenerationFailed("scene extent must be at least 10 m");
    if (spec.corridor_width_m < 3.0 * spec.resolution)
        throw GenerationFailed("corridor width must be at least 3 cells");
    const int side = static_cast<int>(std::lround(spec.extent_m / spec.resolution));

    constexpr int kMaxAttempts = 100;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Rng rng(mix_seed(seed, static_cast<uint64_t>(attempt)));
        OccupancyGrid grid = detail::generate_scene_attempt(rng, spec, side);
        if (free_region_connected(grid)) return grid;
    }
    throw GenerationFailed("no connected layout after bounded retries");
}

} // namespace longhot
