#pragma once

#include <cstdint>

namespace corank {

/// Counter-based per-trial random stream: the state is derived from
/// (seed, trial) alone, so any partition of trials across workers produces
/// the same draws as a serial run.
class TrialRng {
    std::uint64_t s_;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial)
        : s_(mix(seed + 0x9E3779B97F4A7C15ull * (trial + 1))) {}

    std::uint64_t next() {
        s_ += 0x9E3779B97F4A7C15ull;
        return mix(s_);
    }

    /// Uniform draw in [0, n), unbiased by rejection.
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % n;
        std::uint64_t r;
        do {
            r = next();
        } while (r >= limit);
        return r % n;
    }
};

}  // namespace corank
