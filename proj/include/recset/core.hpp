#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace recset {

inline constexpr std::string_view library_version = "0.1.0";
inline constexpr int report_schema_version = 1;

/// Bad parameters, malformed text forms, scale mismatches.
struct invalid_argument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A computation would exceed a configured size cap (enumeration, exact counting).
struct cap_exceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Size caps shared by every module. Defaults keep exhaustive work below a
/// few hundred megabytes.
struct Limits {
    /// Largest group order p^(2^n) that may be enumerated or materialized.
    std::uint64_t enumeration_cap = std::uint64_t{1} << 24;
    /// Largest bit length 2^n * log2(p) for which counts are computed as exact big integers.
    std::uint64_t exact_bits_cap = std::uint64_t{1} << 16;
};

inline bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Largest prime accepted for element coefficients (digits are stored in bytes).
inline constexpr std::uint32_t max_prime = 251;

inline void require_prime(std::uint64_t p) {
    if (!is_prime(p) || p > max_prime)
        throw invalid_argument("p=" + std::to_string(p) + " is not a supported prime (2..251)");
}

/// 2*count > blocks + 2*margin, i.e. count > blocks/2 + margin, without rounding.
inline bool exceeds_half_plus(std::uint64_t count, std::uint64_t blocks, std::int64_t margin) {
    const __int128 lhs = static_cast<__int128>(count) * 2;
    const __int128 rhs = static_cast<__int128>(blocks) + static_cast<__int128>(margin) * 2;
    return lhs > rhs;
}

/// Smallest count c with exceeds_half_plus(c, blocks, margin); may exceed blocks.
inline std::int64_t threshold_count(std::uint64_t blocks, std::int64_t margin) {
    // 2c > blocks + 2m  <=>  c > (blocks + 2m) / 2
    const __int128 rhs = static_cast<__int128>(blocks) + static_cast<__int128>(margin) * 2;
    if (rhs < 0) return 0;
    return static_cast<std::int64_t>(rhs / 2 + 1);
}

} // namespace recset
