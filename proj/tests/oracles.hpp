#pragma once

// Brute-force reference implementations used by the tests. They work on plain
// coefficient vectors and share no code with the library beyond the
// GroupElement type they convert to and from.

#include <cstdint>
#include <utility>
#include <vector>

#include "recset/element.hpp"

namespace oracle {

using Coeffs = std::vector<std::uint32_t>;

/// Coefficients of the element with the given index: coefficient j is digit j
/// of the index written in base p, most significant digit first.
inline Coeffs from_index(std::uint64_t index, std::uint32_t p, std::uint64_t length) {
    Coeffs c(length, 0);
    for (std::uint64_t j = length; j-- > 0;) {
        c[j] = static_cast<std::uint32_t>(index % p);
        index /= p;
    }
    return c;
}

inline std::uint64_t group_size(std::uint32_t p, unsigned n) {
    std::uint64_t s = 1;
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << n); ++j) s *= p;
    return s;
}

inline recset::GroupElement to_element(const Coeffs& c, std::uint32_t p, unsigned n) {
    recset::GroupElement g(p, n);
    for (std::uint64_t j = 0; j < c.size(); ++j) g.set(j, c[j]);
    return g;
}

inline Coeffs from_element(const recset::GroupElement& g) {
    Coeffs c(g.size());
    for (std::uint64_t j = 0; j < g.size(); ++j) c[j] = g[j];
    return c;
}

/// count > blocks/2 + margin, in integers.
inline bool more_than_half_plus(std::int64_t count, std::int64_t blocks, std::int64_t margin) {
    return 2 * count > blocks + 2 * margin;
}

/// Membership in the nested niveau set, straight from the recursive definition.
inline bool niveau(const Coeffs& c, std::size_t first, std::size_t len, std::uint32_t i,
                   const std::vector<std::pair<unsigned, std::int64_t>>& chain, std::size_t level, unsigned base) {
    const std::int64_t blocks = std::int64_t{1} << (chain[level].first - base);
    std::int64_t hits = 0;
    const std::size_t block_len = len / static_cast<std::size_t>(blocks);
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::size_t start = first + static_cast<std::size_t>(b) * block_len;
        if (level + 1 == chain.size()) {
            hits += c[start] == i;
        } else {
            hits += niveau(c, start, block_len, i, chain, level + 1, chain[level].first);
        }
    }
    return more_than_half_plus(hits, blocks, chain[level].second);
}

inline bool niveau(const Coeffs& c, std::uint32_t i, const std::vector<std::pair<unsigned, std::int64_t>>& chain) {
    return niveau(c, 0, c.size(), i, chain, 0, 0);
}

inline std::uint64_t hamming(const Coeffs& a, const Coeffs& b) {
    std::uint64_t d = 0;
    for (std::size_t j = 0; j < a.size(); ++j) d += a[j] != b[j];
    return d;
}

inline Coeffs constant(std::uint64_t length, std::uint32_t x) { return Coeffs(length, x); }

inline Coeffs add(const Coeffs& a, const Coeffs& b, std::uint32_t p) {
    Coeffs r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) r[j] = (a[j] + b[j]) % p;
    return r;
}

inline Coeffs sub(const Coeffs& a, const Coeffs& b, std::uint32_t p) {
    Coeffs r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) r[j] = (a[j] + p - b[j]) % p;
    return r;
}

/// Binomial coefficient by Pascal's triangle, for small arguments.
inline std::uint64_t choose(unsigned n, unsigned k) {
    if (k > n) return 0;
    std::vector<std::uint64_t> row(k + 1, 0);
    row[0] = 1;
    for (unsigned i = 1; i <= n; ++i)
        for (unsigned j = std::min(i, k); j > 0; --j) row[j] += row[j - 1];
    return row[k];
}

/// Proper k-colouring exists? Plain backtracking over vertices in order.
inline bool colorable(const std::vector<std::vector<int>>& adj, unsigned k) {
    const std::size_t n = adj.size();
    std::vector<int> color(n, -1);
    auto rec = [&](auto&& self, std::size_t v) -> bool {
        if (v == n) return true;
        int used = 0;
        for (std::size_t u = 0; u < v; ++u) used = std::max(used, color[u] + 1);
        for (int c = 0; c < static_cast<int>(k) && c <= used; ++c) {
            bool ok = true;
            for (int u : adj[v])
                if (color[static_cast<std::size_t>(u)] == c) { ok = false; break; }
            if (!ok) continue;
            color[v] = c;
            if (self(self, v + 1)) return true;
            color[v] = -1;
        }
        return false;
    };
    return rec(rec, 0);
}

} // namespace oracle
