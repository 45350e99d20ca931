#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace recset {

/// Seeded source of randomness. mt19937_64 output is fixed by the standard, and
/// every derived draw below uses integer arithmetic only, so a seed reproduces
/// the same stream on every conforming platform.
class RandomStream {
public:
    static constexpr std::string_view algorithm = "mt19937_64";

    explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound), bound > 0 (rejection on the top range).
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// True with probability num/den (exact).
    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

} // namespace recset
