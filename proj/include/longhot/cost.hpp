#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace longhot {

// Path cost on the 8-connected grid, kept as exact move counts. A path's
// length is straight*res + diagonal*res*sqrt(2); comparing two costs with
// integer arithmetic sidesteps float-summation-order effects entirely, which
// is what lets independently coded searches agree exactly.
struct StepCost {
    uint32_t straight = 0;
    uint32_t diagonal = 0;

    static constexpr StepCost unreachable() {
        return {std::numeric_limits<uint32_t>::max(), std::numeric_limits<uint32_t>::max()};
    }

    bool is_unreachable() const {
        return straight == std::numeric_limits<uint32_t>::max();
    }

    StepCost operator+(const StepCost& o) const {
        return {straight + o.straight, diagonal + o.diagonal};
    }

    friend bool operator==(const StepCost& a, const StepCost& b) = default;

    // meters, computed canonically; identical (straight, diagonal) pairs
    // always produce identical doubles.
    double meters(double resolution) const {
        if (is_unreachable()) return std::numeric_limits<double>::infinity();
        return static_cast<double>(straight) * resolution +
               static_cast<double>(diagonal) * (resolution * std::sqrt(2.0));
    }
};

// Exact comparison of a.straight + a.diagonal*sqrt(2) vs the same for b.
// Reduces to testing the sign of u + v*sqrt(2) for integer u, v, which is
// decidable by comparing u^2 against 2 v^2.
inline bool step_cost_less(const StepCost& a, const StepCost& b) {
    if (a.is_unreachable()) return false;
    if (b.is_unreachable()) return true;
    const int64_t u = static_cast<int64_t>(a.straight) - static_cast<int64_t>(b.straight);
    const int64_t v = static_cast<int64_t>(a.diagonal) - static_cast<int64_t>(b.diagonal);
    if (u >= 0 && v >= 0) return false;
    if (u <= 0 && v <= 0) return u != 0 || v != 0;
    // Mixed signs: u + v*sqrt(2) < 0 ?
    if (u < 0) {
        // true iff |u| > v*sqrt(2)  iff  u^2 > 2 v^2
        return u * u > 2 * v * v;
    }
    // u > 0, v < 0: true iff u < |v|*sqrt(2)  iff  u^2 < 2 v^2
    return u * u < 2 * v * v;
}

inline const StepCost& step_cost_min(const StepCost& a, const StepCost& b) {
    return step_cost_less(b, a) ? b : a;
}

} // namespace longhot
