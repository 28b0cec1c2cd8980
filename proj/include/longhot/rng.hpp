#pragma once

#include <cstdint>
#include <limits>

namespace longhot {

// splitmix64: tiny, fast, and bit-identical on every platform. All sampling
// in the project goes through this so that suites, traces and reports are
// reproducible byte-for-byte regardless of standard library.
inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// One-shot stateless mix, used to derive independent seeds (per episode,
// per worker, per slot) from a base seed.
inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(uint64_t seed = 0) : state_(seed) {}

    uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1). 53 mantissa bits, exact on every IEEE platform.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
    uint64_t next_below(uint64_t bound) {
        if (bound <= 1) return 0;
        const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % bound;
        uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % bound;
    }

    // Uniform integer in [lo, hi] inclusive.
    int64_t next_int(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(next_below(static_cast<uint64_t>(hi - lo + 1)));
    }

    double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

private:
    uint64_t state_;
};

// Deterministic hash of a key tuple to a uniform double in [0,1). Used by
// the random score providers: the value depends only on (seed, keys...),
// never on call order.
template <typename... Keys>
double hashed_uniform(uint64_t seed, Keys... keys) {
    uint64_t s = seed;
    ((s = mix_seed(s, static_cast<uint64_t>(keys))), ...);
    return static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
}

} // namespace longhot
