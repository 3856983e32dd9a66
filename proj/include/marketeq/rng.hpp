#pragma once

#include <cstdint>

namespace marketeq {

// splitmix64 step: add the golden-ratio gamma, then finalize.
// The finalizer alone is a strong 64-bit mixer (Stafford mix13).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Strictly inside (0,1): (h>>11) in [0, 2^53), shifted by +0.5 ulp.
constexpr double to_unit_interval(std::uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Counter-based uniform stream. The value at (seed, consumer, slot) is a
/// pure function of its key, so sampling order and thread layout cannot
/// change results. Slots 0..n-1 are the per-provider draws; slot n is the
/// common base-value draw, which keeps coupled samples coupled.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t consumer, std::uint64_t slot) {
    return to_unit_interval(mix64(mix64(mix64(seed) ^ consumer) ^ slot));
}

/// Small sequential generator for test scaffolding and parameter sweeps.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double next_u01() { return to_unit_interval(next()); }

    /// Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_u01(); }
};

}  // namespace marketeq
