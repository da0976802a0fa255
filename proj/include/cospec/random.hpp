#pragma once

#include <cstdint>

namespace cospec {

// Counter-based randomness. Every draw is a pure function of
// (master_seed, trial_index, slot, counter), so results do not depend on
// thread scheduling or call order. The scheme is versioned as "splitmix64-keyed-v1"
// and must not change without bumping that name.

inline constexpr const char* kRngScheme = "splitmix64-keyed-v1";

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic stream for one (seed, trial, slot) triple.
class KeyedStream {
public:
    constexpr KeyedStream(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t slot) noexcept
        : key_(splitmix64(splitmix64(splitmix64(master_seed) ^ trial) ^ slot)) {}

    constexpr std::uint64_t next() noexcept { return splitmix64(key_ + 0x632be59bd9b4e019ULL * counter_++); }

    /// Unbiased integer in [0, bound) by rejection; bound must be positive.
    constexpr std::uint64_t uniform_below(std::uint64_t bound) noexcept {
        if (bound <= 1) return 0;
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next();
            if (x >= threshold) return x % bound;
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace cospec
