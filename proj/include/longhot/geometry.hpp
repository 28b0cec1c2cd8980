#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace longhot {

// Continuous world coordinate in meters.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point& a, const Point& b) = default;
};

inline double euclidean(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// Integer cell coordinate. Cells tile the plane at the grid resolution;
// a point maps to exactly one cell via floor(coord / resolution).
struct CellIndex {
    int x = 0;
    int y = 0;

    friend bool operator==(const CellIndex& a, const CellIndex& b) = default;
};

inline CellIndex cell_of(const Point& p, double resolution) {
    return {static_cast<int>(std::floor(p.x / resolution)),
            static_cast<int>(std::floor(p.y / resolution))};
}

inline Point cell_center(const CellIndex& c, double resolution) {
    return {(c.x + 0.5) * resolution, (c.y + 0.5) * resolution};
}

// Agent headings are multiples of the 30-degree turn step, CCW from +x.
inline constexpr int kTurnDeg = 30;
inline constexpr int kDirections = 12; // 360 / 30

inline int normalize_heading(int deg) {
    int h = deg % 360;
    if (h < 0) h += 360;
    return h;
}

// Signed smallest angular difference a-b in (-180, 180].
inline double angle_diff(double a, double b) {
    double d = std::fmod(a - b, 360.0);
    if (d <= -180.0) d += 360.0;
    if (d > 180.0) d -= 360.0;
    return d;
}

// Heading -> direction slot in {0..11}. Headings are multiples of 30 in
// normal operation; nearest-slot rounding keeps odd inputs well-defined.
inline int direction_slot(int heading_deg) {
    const int h = normalize_heading(heading_deg);
    return ((h + kTurnDeg / 2) / kTurnDeg) % kDirections;
}

// Exact unit vectors for the 12 headings. Spelled as literals so that agent
// positions are reproducible bit-for-bit (no libm in the motion path).
inline constexpr double kHalfSqrt3 = 0.8660254037844386467637231707529362;

inline constexpr std::array<double, kDirections> kHeadingCos = {
    1.0, kHalfSqrt3, 0.5, 0.0, -0.5, -kHalfSqrt3,
    -1.0, -kHalfSqrt3, -0.5, 0.0, 0.5, kHalfSqrt3};

inline constexpr std::array<double, kDirections> kHeadingSin = {
    0.0, 0.5, kHalfSqrt3, 1.0, kHalfSqrt3, 0.5,
    0.0, -0.5, -kHalfSqrt3, -1.0, -kHalfSqrt3, -0.5};

inline Point heading_step(const Point& from, int heading_deg, double dist) {
    const int slot = normalize_heading(heading_deg) / kTurnDeg;
    return {from.x + dist * kHeadingCos[slot], from.y + dist * kHeadingSin[slot]};
}

struct Pose {
    Point position;
    int heading_deg = 0; // multiple of 30 in [0, 330]

    friend bool operator==(const Pose& a, const Pose& b) = default;
};

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Sensor rays run at integer degrees; one shared table keeps every user of
// ray geometry (env raycast, map carving) on identical values.
struct DegreeTrig {
    std::array<double, 360> cos_v{};
    std::array<double, 360> sin_v{};
    DegreeTrig() {
        for (int d = 0; d < 360; ++d) {
            cos_v[d] = std::cos(deg_to_rad(d));
            sin_v[d] = std::sin(deg_to_rad(d));
        }
    }
};

inline const DegreeTrig& degree_trig() {
    static const DegreeTrig table;
    return table;
}

inline double cos_deg(int deg) { return degree_trig().cos_v[normalize_heading(deg)]; }
inline double sin_deg(int deg) { return degree_trig().sin_v[normalize_heading(deg)]; }

// Bearing of a target point relative to a pose, in (-180, 180], positive CCW.
inline double bearing_deg(const Pose& pose, const Point& target) {
    const double abs_deg = rad_to_deg(std::atan2(target.y - pose.position.y, target.x - pose.position.x));
    return angle_diff(abs_deg, static_cast<double>(pose.heading_deg));
}

} // namespace longhot
