#pragma once

// Hamming balls and niveau sets: specifications, text forms, membership.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "recset/codes.hpp"
#include "recset/core.hpp"
#include "recset/element.hpp"

namespace recset {

/// center + U(n,k): elements differing from `center` on at most k scale-n cylinders.
class HammingBallSpec {
public:
    HammingBallSpec(std::uint32_t p, unsigned n, std::uint64_t k, GroupElement center)
        : p_(p), n_(n), k_(k), center_(std::move(center)) {
        require_prime(p);
        if (center_.p() != p) throw invalid_argument("ball center has the wrong prime");
        if (center_.n() > n) throw invalid_argument("ball center scale exceeds the ball scale");
        if (n < 64 && k > (std::uint64_t{1} << n))
            throw invalid_argument("radius " + std::to_string(k) + " exceeds 2^n = " + std::to_string(std::uint64_t{1} << n));
    }

    /// U(n,k).
    static HammingBallSpec U(std::uint32_t p, unsigned n, std::uint64_t k) {
        return {p, n, k, make_zero(p, 0)};
    }
    /// V(n,k) = U(n,k) + 1.
    static HammingBallSpec V(std::uint32_t p, unsigned n, std::uint64_t k) {
        return {p, n, k, make_ones(p, 0)};
    }

    std::uint32_t p() const { return p_; }
    unsigned n() const { return n_; }
    std::uint64_t k() const { return k_; }
    const GroupElement& center() const { return center_; }
    GroupElement center_at_scale() const { return embed(center_, n_); }

    /// "p=2;n=2;k=1;center=U", "...center=V", or "...center=<digits>@<scale>".
    std::string format() const {
        std::string c;
        if (center_.is_zero()) c = "U";
        else if (center_ == make_ones(p_, center_.n())) c = "V";
        else {
            const std::string enc = center_.encode();
            c = enc.substr(enc.rfind(';') + 1) + "@" + std::to_string(center_.n());
        }
        return "p=" + std::to_string(p_) + ";n=" + std::to_string(n_) + ";k=" + std::to_string(k_) + ";center=" + c;
    }

    static HammingBallSpec parse(std::string_view text) {
        const auto parts = detail::split(text, ';');
        if (parts.size() != 4) throw invalid_argument("ball spec must be 'p=<p>;n=<n>;k=<k>;center=U|V|<digits>@<scale>'");
        const auto p = static_cast<std::uint32_t>(detail::parse_uint(detail::expect_key(parts[0], "p"), "p"));
        const auto n = static_cast<unsigned>(detail::parse_uint(detail::expect_key(parts[1], "n"), "n"));
        const auto k = detail::parse_uint(detail::expect_key(parts[2], "k"), "k");
        const auto c = detail::expect_key(parts[3], "center");
        require_prime(p);
        if (c == "U") return U(p, n, k);
        if (c == "V") return V(p, n, k);
        const auto at = c.find('@');
        if (at == std::string_view::npos) throw invalid_argument("ball center must be U, V or <digits>@<scale>");
        const std::string enc = "p=" + std::to_string(p) + ";n=" + std::string(c.substr(at + 1)) + ";" + std::string(c.substr(0, at));
        return {p, n, k, GroupElement::decode(enc)};
    }

    friend bool operator==(const HammingBallSpec& a, const HammingBallSpec& b) {
        return a.p_ == b.p_ && a.n_ == b.n_ && a.k_ == b.k_ && a.center_at_scale() == b.center_at_scale();
    }

private:
    std::uint32_t p_;
    unsigned n_;
    std::uint64_t k_;
    GroupElement center_;
};

struct ChainLevel {
    unsigned n = 0;
    std::int64_t m = 0;
    friend bool operator==(const ChainLevel&, const ChainLevel&) = default;
};

/// A_i((n_1,m_1),...,(n_l,m_l)).
class NiveauSpec {
public:
    NiveauSpec(std::uint32_t p, std::uint32_t i, std::vector<ChainLevel> chain, bool strict = false)
        : p_(p), i_(i), chain_(std::move(chain)) {
        validate(strict);
    }

    static NiveauSpec base(std::uint32_t p, std::uint32_t i, unsigned n, std::int64_t m) {
        return {p, i, {{n, m}}};
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t i() const { return i_; }
    const std::vector<ChainLevel>& chain() const { return chain_; }
    std::size_t levels() const { return chain_.size(); }
    unsigned scale() const { return chain_.back().n; }

    /// Chain with scales measured from n_1: (n_2-n_1, m_2), ..., (n_l-n_1, m_l).
    NiveauSpec tail() const {
        if (chain_.size() < 2) throw invalid_argument("a single-level chain has no tail");
        std::vector<ChainLevel> t;
        for (std::size_t j = 1; j < chain_.size(); ++j) t.push_back({chain_[j].n - chain_[0].n, chain_[j].m});
        return {p_, i_, std::move(t)};
    }

    /// The first `l` levels.
    NiveauSpec prefix(std::size_t l) const {
        if (l == 0 || l > chain_.size()) throw invalid_argument("prefix length out of range");
        return {p_, i_, std::vector<ChainLevel>(chain_.begin(), chain_.begin() + static_cast<std::ptrdiff_t>(l))};
    }

    NiveauSpec with_residue(std::uint32_t i) const { return {p_, i % p_, chain_}; }

    NiveauSpec with_margin(std::size_t j, std::int64_t m) const {
        auto c = chain_;
        c.at(j).m = m;
        return {p_, i_, std::move(c)};
    }

    /// True when the last level's base set is empty, 2*m_l >= 2^(n_l - n_{l-1}).
    bool level_vacuous(std::size_t j) const {
        const unsigned width = chain_[j].n - (j == 0 ? 0 : chain_[j - 1].n);
        return threshold_count(std::uint64_t{1} << width, chain_[j].m) > static_cast<std::int64_t>(std::uint64_t{1} << width);
    }

    void validate(bool strict) const {
        require_prime(p_);
        if (i_ >= p_) throw invalid_argument("residue " + std::to_string(i_) + " not below p=" + std::to_string(p_));
        if (chain_.empty()) throw invalid_argument("niveau chain is empty");
        for (std::size_t j = 0; j < chain_.size(); ++j) {
            if (chain_[j].m < 0) throw invalid_argument("negative margin in niveau chain");
            if (strict && chain_[j].m == 0) throw invalid_argument("margin 0 rejected in strict mode");
            if (j > 0 && chain_[j].n <= chain_[j - 1].n) throw invalid_argument("chain scales must be strictly increasing");
        }
        if (chain_.back().n > 62) throw invalid_argument("chain scale above 62");
    }

    /// "p=2;i=1;chain=(2,1),(4,1)".
    std::string format() const {
        std::string s = "p=" + std::to_string(p_) + ";i=" + std::to_string(i_) + ";chain=";
        for (std::size_t j = 0; j < chain_.size(); ++j) {
            if (j) s += ",";
            s += "(" + std::to_string(chain_[j].n) + "," + std::to_string(chain_[j].m) + ")";
        }
        return s;
    }

    static NiveauSpec parse(std::string_view text, bool strict = false) {
        const auto parts = detail::split(text, ';');
        if (parts.size() != 3) throw invalid_argument("niveau spec must be 'p=<p>;i=<i>;chain=(n,m),...'");
        const auto p = static_cast<std::uint32_t>(detail::parse_uint(detail::expect_key(parts[0], "p"), "p"));
        const auto i = static_cast<std::uint32_t>(detail::parse_uint(detail::expect_key(parts[1], "i"), "i"));
        std::string_view rest = detail::expect_key(parts[2], "chain");
        std::vector<ChainLevel> chain;
        while (!rest.empty()) {
            if (rest.front() != '(') throw invalid_argument("chain entries must look like (n,m)");
            const auto close = rest.find(')');
            if (close == std::string_view::npos) throw invalid_argument("unterminated chain entry");
            const auto inner = detail::split(rest.substr(1, close - 1), ',');
            if (inner.size() != 2) throw invalid_argument("chain entries must look like (n,m)");
            chain.push_back({static_cast<unsigned>(detail::parse_uint(inner[0], "n")),
                             static_cast<std::int64_t>(detail::parse_uint(inner[1], "m"))});
            rest.remove_prefix(close + 1);
            if (!rest.empty()) {
                if (rest.front() != ',') throw invalid_argument("chain entries must be comma separated");
                rest.remove_prefix(1);
            }
        }
        return {p, i, std::move(chain), strict};
    }

    friend bool operator==(const NiveauSpec&, const NiveauSpec&) = default;

private:
    std::uint32_t p_;
    std::uint32_t i_;
    std::vector<ChainLevel> chain_;
};

/// Niveau membership over any coefficient store. `count(residue, first, len)`
/// counts coefficients equal to residue among positions [first, first+len) of
/// an element at the chain's last scale, shifted by `offset`.
template <class Count>
bool niveau_member(const Count& count, std::uint32_t residue, std::span<const ChainLevel> chain,
                   std::uint64_t offset = 0, unsigned base_scale = 0) {
    const unsigned width = chain.front().n - base_scale;
    const std::uint64_t blocks = std::uint64_t{1} << width;
    const std::int64_t need = threshold_count(blocks, chain.front().m);
    if (need > static_cast<std::int64_t>(blocks)) return false;
    if (chain.size() == 1) return static_cast<std::int64_t>(count(residue, offset, blocks)) >= need;

    const unsigned sub = chain.back().n - chain.front().n;
    const std::uint64_t block_len = std::uint64_t{1} << sub;
    const auto tail = chain.subspan(1);
    std::int64_t hits = 0;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        if (niveau_member(count, residue, tail, offset + b * block_len, chain.front().n)) {
            if (++hits >= need) return true;
        }
        if (hits + static_cast<std::int64_t>(blocks - b - 1) < need) return false;
    }
    return hits >= need;
}

inline bool in_niveau(const GroupElement& g, const NiveauSpec& spec) {
    if (g.p() != spec.p()) throw invalid_argument("element and niveau spec use different primes");
    if (g.n() != spec.scale())
        throw invalid_argument("element scale " + std::to_string(g.n()) + " differs from the chain scale " +
                               std::to_string(spec.scale()));
    auto count = [&g](std::uint32_t r, std::uint64_t first, std::uint64_t len) { return g.count(r, first, len); };
    return niveau_member(count, spec.i(), std::span<const ChainLevel>(spec.chain()));
}

inline bool in_niveau(const CodeSpace& space, std::uint64_t code, const NiveauSpec& spec) {
    if (space.p() != spec.p() || space.n() != spec.scale()) throw invalid_argument("code space does not match niveau spec");
    auto count = [&](std::uint32_t r, std::uint64_t first, std::uint64_t len) { return space.count(code, r, first, len); };
    return niveau_member(count, spec.i(), std::span<const ChainLevel>(spec.chain()));
}

inline std::uint64_t distance_to_center(const GroupElement& g, const GroupElement& center_at_scale) {
    if (g.p() == 2) {
        std::uint64_t d = 0;
        const auto a = g.words();
        const auto b = center_at_scale.words();
        for (std::size_t w = 0; w < a.size(); ++w) d += static_cast<std::uint64_t>(std::popcount(a[w] ^ b[w]));
        return d;
    }
    std::uint64_t d = 0;
    for (std::uint64_t j = 0; j < g.size(); ++j) d += g[j] != center_at_scale[j];
    return d;
}

/// g lies in center + U(n,k). A lower-scale g is embedded first.
inline bool in_hamming(const GroupElement& g, const HammingBallSpec& spec) {
    if (g.p() != spec.p()) throw invalid_argument("element and ball use different primes");
    if (g.n() > spec.n())
        throw invalid_argument("element scale " + std::to_string(g.n()) + " exceeds the ball scale " + std::to_string(spec.n()));
    const GroupElement x = g.n() == spec.n() ? g : embed(g, spec.n());
    return distance_to_center(x, spec.center_at_scale()) <= spec.k();
}

/// h in G^(h.n)[g, m]: every block h|_tau lies in A_{g(tau)}(h.n - g.n, m).
inline bool in_block_extension(const GroupElement& h, const GroupElement& g, std::int64_t m) {
    if (h.p() != g.p()) throw invalid_argument("elements use different primes");
    if (h.n() <= g.n()) throw invalid_argument("block extension needs h.n > g.n");
    const std::uint64_t block = std::uint64_t{1} << (h.n() - g.n());
    for (std::uint64_t t = 0; t < g.size(); ++t)
        if (!exceeds_half_plus(h.count(g[t], t * block, block), block, m)) return false;
    return true;
}

/// Membership of a code in center + U(n,k), with the center given as a code.
inline bool in_hamming(const CodeSpace& space, std::uint64_t code, std::uint64_t center_code, std::uint64_t k) {
    if (space.p() == 2) return static_cast<std::uint64_t>(std::popcount(code ^ center_code)) <= k;
    std::uint64_t d = 0;
    for (std::uint64_t j = 0; j < space.length(); ++j) d += space.digit(code, j) != space.digit(center_code, j);
    return d <= k;
}

} // namespace recset
