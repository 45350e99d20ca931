#pragma once

// Elements of G_p^(n): functions on the 2^n cylinders of scale n with values in F_p.
//
// Cylinder strings tau = tau_1 ... tau_m are indexed MSB-first:
// index(tau) = sum_j tau_j * 2^(m-j). With that convention the restriction of
// an element to a cylinder [tau] is the contiguous coefficient slice
// [index(tau) * 2^(n-m), (index(tau)+1) * 2^(n-m)).

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recset/core.hpp"
#include "recset/random.hpp"

namespace recset {

/// A finite 0/1 string, an element of Omega_m.
class BinaryString {
public:
    static constexpr unsigned max_length = 62;

    BinaryString() = default;

    BinaryString(std::uint64_t index, unsigned length) : index_(index), length_(length) {
        if (length > max_length)
            throw invalid_argument("binary string longer than " + std::to_string(max_length));
        if (length < 64 && (index >> length) != 0)
            throw invalid_argument("index " + std::to_string(index) + " does not fit in " +
                                   std::to_string(length) + " bits");
    }

    static BinaryString parse(std::string_view bits) {
        std::uint64_t idx = 0;
        for (char c : bits) {
            if (c != '0' && c != '1') throw invalid_argument("binary string must use 0/1");
            idx = (idx << 1) | static_cast<std::uint64_t>(c - '0');
        }
        return BinaryString(idx, static_cast<unsigned>(bits.size()));
    }

    unsigned length() const { return length_; }
    std::uint64_t index() const { return index_; }

    /// tau_{j+1}, j in [0, length).
    bool operator[](unsigned j) const { return ((index_ >> (length_ - 1 - j)) & 1u) != 0; }

    BinaryString concat(const BinaryString& tail) const {
        return BinaryString((index_ << tail.length_) | tail.index_, length_ + tail.length_);
    }

    BinaryString prefix(unsigned m) const {
        if (m > length_) throw invalid_argument("prefix longer than string");
        return BinaryString(index_ >> (length_ - m), m);
    }

    std::string str() const {
        std::string s(length_, '0');
        for (unsigned j = 0; j < length_; ++j)
            if ((*this)[j]) s[j] = '1';
        return s;
    }

    friend bool operator==(const BinaryString&, const BinaryString&) = default;
    friend auto operator<=>(const BinaryString&, const BinaryString&) = default;

private:
    std::uint64_t index_ = 0;
    unsigned length_ = 0;
};

/// g in G_p^(n), stored as its 2^n coefficients in cylinder-index order.
/// p = 2 is bit-packed (coefficient j at bit j%64 of word j/64); odd p uses one byte per coefficient.
class GroupElement {
public:
    static constexpr unsigned max_scale = 26;

    GroupElement(std::uint32_t p, unsigned n) : p_(p), n_(n) {
        require_prime(p);
        if (n > max_scale)
            throw cap_exceeded("scale " + std::to_string(n) + " exceeds the explicit element limit " +
                               std::to_string(max_scale));
        if (p == 2)
            bits_.assign((size() + 63) / 64, 0);
        else
            digits_.assign(size(), 0);
    }

    std::uint32_t p() const { return p_; }
    unsigned n() const { return n_; }
    std::uint64_t size() const { return std::uint64_t{1} << n_; }

    std::uint32_t operator[](std::uint64_t j) const {
        if (p_ == 2) return static_cast<std::uint32_t>((bits_[j >> 6] >> (j & 63)) & 1u);
        return digits_[j];
    }

    void set(std::uint64_t j, std::uint32_t value) {
        if (value >= p_) throw invalid_argument("coefficient out of range");
        if (p_ == 2) {
            const std::uint64_t mask = std::uint64_t{1} << (j & 63);
            if (value) bits_[j >> 6] |= mask;
            else bits_[j >> 6] &= ~mask;
        } else {
            digits_[j] = static_cast<std::uint8_t>(value);
        }
    }

    /// Packed words, p = 2 only.
    std::span<const std::uint64_t> words() const { return bits_; }
    std::span<std::uint64_t> words() { return bits_; }

    /// Number of coefficients equal to `residue` among [first, first+len).
    std::uint64_t count(std::uint32_t residue, std::uint64_t first, std::uint64_t len) const {
        if (p_ != 2) {
            return static_cast<std::uint64_t>(std::count(digits_.begin() + static_cast<std::ptrdiff_t>(first),
                                                         digits_.begin() + static_cast<std::ptrdiff_t>(first + len),
                                                         static_cast<std::uint8_t>(residue)));
        }
        const std::uint64_t ones = ones_in(first, len);
        return residue == 1 ? ones : len - ones;
    }

    GroupElement& operator+=(const GroupElement& other) {
        check_compatible(other);
        if (p_ == 2) {
            for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] ^= other.bits_[w];
        } else {
            for (std::size_t j = 0; j < digits_.size(); ++j)
                digits_[j] = static_cast<std::uint8_t>((digits_[j] + other.digits_[j]) % p_);
        }
        return *this;
    }

    GroupElement negated() const {
        GroupElement r = *this;
        if (p_ != 2)
            for (auto& d : r.digits_) d = static_cast<std::uint8_t>((p_ - d) % p_);
        return r;
    }

    GroupElement& operator-=(const GroupElement& other) { return *this += other.negated(); }

    friend GroupElement operator+(GroupElement a, const GroupElement& b) { return a += b; }
    friend GroupElement operator-(GroupElement a, const GroupElement& b) { return a -= b; }
    GroupElement operator-() const { return negated(); }

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.p_ == b.p_ && a.n_ == b.n_ && a.bits_ == b.bits_ && a.digits_ == b.digits_;
    }

    bool is_zero() const {
        if (p_ == 2) return std::all_of(bits_.begin(), bits_.end(), [](auto w) { return w == 0; });
        return std::all_of(digits_.begin(), digits_.end(), [](auto d) { return d == 0; });
    }

    std::size_t hash() const {
        std::size_t h = std::hash<std::uint64_t>{}((std::uint64_t{p_} << 32) | n_);
        auto mix = [&h](std::uint64_t v) { h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
        for (auto w : bits_) mix(w);
        for (auto d : digits_) mix(d);
        return h;
    }

    /// Canonical text form "p=<p>;n=<n>;<digits in index order>", digits base 36.
    std::string encode() const {
        if (p_ > 36) throw invalid_argument("text encoding supports p <= 36");
        std::string out = "p=" + std::to_string(p_) + ";n=" + std::to_string(n_) + ";";
        out.reserve(out.size() + size());
        for (std::uint64_t j = 0; j < size(); ++j) out.push_back(digit_char((*this)[j]));
        return out;
    }

    static GroupElement decode(std::string_view text);

private:
    static char digit_char(std::uint32_t d) { return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + d - 10); }

    void check_compatible(const GroupElement& other) const {
        if (p_ != other.p_ || n_ != other.n_)
            throw invalid_argument("group elements from different groups (p=" + std::to_string(p_) + ",n=" +
                                   std::to_string(n_) + " vs p=" + std::to_string(other.p_) +
                                   ",n=" + std::to_string(other.n_) + ")");
    }

    std::uint64_t ones_in(std::uint64_t first, std::uint64_t len) const {
        std::uint64_t total = 0;
        std::uint64_t pos = first;
        const std::uint64_t end = first + len;
        while (pos < end) {
            const std::uint64_t w = pos >> 6;
            const unsigned off = static_cast<unsigned>(pos & 63);
            const std::uint64_t take = std::min<std::uint64_t>(64 - off, end - pos);
            std::uint64_t word = bits_[w] >> off;
            if (take < 64) word &= (std::uint64_t{1} << take) - 1;
            total += static_cast<std::uint64_t>(std::popcount(word));
            pos += take;
        }
        return total;
    }

    std::uint32_t p_;
    unsigned n_;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint8_t> digits_;
};

namespace detail {

inline std::uint64_t parse_uint(std::string_view s, std::string_view what) {
    if (s.empty()) throw invalid_argument("missing value for " + std::string(what));
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') throw invalid_argument("malformed " + std::string(what) + ": '" + std::string(s) + "'");
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

inline std::string_view expect_key(std::string_view field, std::string_view key) {
    if (field.size() < key.size() + 1 || field.substr(0, key.size()) != key || field[key.size()] != '=')
        throw invalid_argument("expected '" + std::string(key) + "=' in '" + std::string(field) + "'");
    return field.substr(key.size() + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

} // namespace detail

inline GroupElement GroupElement::decode(std::string_view text) {
    const auto parts = detail::split(text, ';');
    if (parts.size() != 3) throw invalid_argument("element encoding must be 'p=<p>;n=<n>;<digits>'");
    const auto p = static_cast<std::uint32_t>(detail::parse_uint(detail::expect_key(parts[0], "p"), "p"));
    const auto n = static_cast<unsigned>(detail::parse_uint(detail::expect_key(parts[1], "n"), "n"));
    GroupElement g(p, n);
    if (parts[2].size() != g.size())
        throw invalid_argument("expected " + std::to_string(g.size()) + " digits, got " + std::to_string(parts[2].size()));
    for (std::uint64_t j = 0; j < g.size(); ++j) {
        const char c = parts[2][j];
        std::uint32_t d;
        if (c >= '0' && c <= '9') d = static_cast<std::uint32_t>(c - '0');
        else if (c >= 'a' && c <= 'z') d = static_cast<std::uint32_t>(c - 'a' + 10);
        else throw invalid_argument("bad digit in element encoding");
        if (d >= p) throw invalid_argument("digit out of range for p");
        g.set(j, d);
    }
    return g;
}

/// x*1: the constant function with value x.
inline GroupElement make_constant(std::uint32_t p, unsigned n, std::uint32_t x) {
    require_prime(p);
    if (x >= p) throw invalid_argument("constant " + std::to_string(x) + " not below p=" + std::to_string(p));
    GroupElement g(p, n);
    if (x == 0) return g;
    if (p == 2) {
        auto w = g.words();
        std::fill(w.begin(), w.end(), ~std::uint64_t{0});
        if (g.size() % 64) w.back() = (std::uint64_t{1} << (g.size() % 64)) - 1;
    } else {
        for (std::uint64_t j = 0; j < g.size(); ++j) g.set(j, x);
    }
    return g;
}

inline GroupElement make_zero(std::uint32_t p, unsigned n) { return make_constant(p, n, 0); }
inline GroupElement make_ones(std::uint32_t p, unsigned n) { return make_constant(p, n, 1); }

inline GroupElement add(const GroupElement& g, const GroupElement& h) { return g + h; }
inline GroupElement subtract(const GroupElement& g, const GroupElement& h) { return g - h; }

/// The inclusion G_p^(n) -> G_p^(n_target), g |-> g o pi_n.
inline GroupElement embed(const GroupElement& g, unsigned n_target) {
    if (n_target < g.n())
        throw invalid_argument("cannot embed scale " + std::to_string(g.n()) + " into smaller scale " +
                               std::to_string(n_target));
    if (n_target == g.n()) return g;
    GroupElement r(g.p(), n_target);
    const unsigned shift = n_target - g.n();
    const std::uint64_t rep = std::uint64_t{1} << shift;
    for (std::uint64_t j = 0; j < g.size(); ++j) {
        const auto v = g[j];
        if (v == 0) continue;
        for (std::uint64_t t = 0; t < rep; ++t) r.set((j << shift) | t, v);
    }
    return r;
}

/// The element of G_p^(s) that embeds to g, when g is constant on scale-s cylinders.
inline std::optional<GroupElement> coarsen(const GroupElement& g, unsigned s) {
    if (s > g.n()) throw invalid_argument("coarsening scale above the element scale");
    const unsigned shift = g.n() - s;
    const std::uint64_t rep = std::uint64_t{1} << shift;
    GroupElement r(g.p(), s);
    for (std::uint64_t j = 0; j < r.size(); ++j) {
        const auto v = g[j << shift];
        for (std::uint64_t t = 1; t < rep; ++t)
            if (g[(j << shift) | t] != v) return std::nullopt;
        r.set(j, v);
    }
    return r;
}

/// g|_tau in G_p^(n-m): g|_tau(omega) = g(tau omega).
inline GroupElement restrict(const GroupElement& g, const BinaryString& tau) {
    if (tau.length() >= g.n())
        throw invalid_argument("restriction string of length " + std::to_string(tau.length()) +
                               " must be shorter than the scale " + std::to_string(g.n()));
    const unsigned sub = g.n() - tau.length();
    GroupElement r(g.p(), sub);
    const std::uint64_t base = tau.index() << sub;
    for (std::uint64_t j = 0; j < r.size(); ++j) r.set(j, g[base + j]);
    return r;
}

/// |g^{-1}(i)|_n: number of scale-n cylinders on which g takes the value i.
inline std::uint64_t level_count(const GroupElement& g, std::uint32_t i) {
    if (i >= g.p()) throw invalid_argument("residue " + std::to_string(i) + " not below p=" + std::to_string(g.p()));
    return g.count(i, 0, g.size());
}

/// Uniform element of G_p^(n).
inline GroupElement random_element(std::uint32_t p, unsigned n, RandomStream& rng) {
    GroupElement g(p, n);
    if (p == 2) {
        auto w = g.words();
        for (auto& word : w) word = rng.next();
        if (g.size() % 64) w.back() &= (std::uint64_t{1} << (g.size() % 64)) - 1;
    } else {
        for (std::uint64_t j = 0; j < g.size(); ++j) g.set(j, static_cast<std::uint32_t>(rng.below(p)));
    }
    return g;
}

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const { return g.hash(); }
};

} // namespace recset
