#pragma once

// Exact-shape random members of niveau sets at scales far too large to store.
//
// A BlockElement of G_2^(N) keeps, for every cylinder of a leaf scale L, only
// the number of ones inside it. Inside a leaf the bits are a uniformly random
// arrangement with that many ones; individual bits are revealed lazily (with
// the exact conditional probability) only when a flip touches them. Niveau
// membership at the top level of a chain depends on leaf counts alone, so
// members of A_i(chain) can be drawn and tested without materializing 2^N bits.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "recset/counting.hpp"
#include "recset/element.hpp"
#include "recset/niveau.hpp"
#include "recset/random.hpp"
#include "recset/verdict.hpp"

namespace recset {

/// Uniform integer in [0, bound) for a big bound.
inline mpz_class uniform_below(const mpz_class& bound, RandomStream& rng) {
    if (bound <= 1) return 0;
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    while (true) {
        mpz_class x = 0;
        std::size_t have = 0;
        while (have < bits) {
            x <<= 64;
            x += mpz_class(std::to_string(rng.next()));
            have += 64;
        }
        x >>= static_cast<mp_bitcnt_t>(have - bits);
        if (x < bound) return x;
    }
}

/// Binomial draws conditioned on an interval, by inverse CDF over cached tables.
class ConditionedBinomial {
public:
    /// w ~ Bin(trials, q) conditioned on lo <= w <= hi.
    std::uint64_t draw(std::uint64_t trials, double q, std::uint64_t lo, std::uint64_t hi, RandomStream& rng) {
        if (lo > hi || hi > trials) throw invalid_argument("empty conditioning range for a binomial draw");
        if (lo == hi) return lo;
        const auto& t = table(trials, q, lo, hi);
        const double u = rng.unit() * t.cdf.back();
        const auto it = std::upper_bound(t.cdf.begin(), t.cdf.end(), u);
        const auto idx = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - t.cdf.begin(), static_cast<std::ptrdiff_t>(t.cdf.size()) - 1));
        return t.first + idx;
    }

private:
    struct Table {
        std::uint64_t first = 0;
        std::vector<double> cdf;
    };

    const Table& table(std::uint64_t trials, double q, std::uint64_t lo, std::uint64_t hi) {
        const auto key = std::make_tuple(trials, q, lo, hi);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        if (q <= 0.0 || q >= 1.0) {
            const std::uint64_t forced = q <= 0.0 ? 0 : trials;
            if (forced < lo || forced > hi) throw invalid_argument("conditioning range has probability zero");
            return cache_[key] = Table{forced, {1.0}};
        }
        const double mean = static_cast<double>(trials) * q;
        const double sd = std::sqrt(static_cast<double>(trials) * q * (1.0 - q));
        const double centre = std::clamp(mean, static_cast<double>(lo), static_cast<double>(hi));
        const double span = 40.0 * sd + 50.0;
        const std::uint64_t a = std::max<std::uint64_t>(lo, centre - span > 0 ? static_cast<std::uint64_t>(centre - span) : 0);
        const std::uint64_t b = std::min<std::uint64_t>(hi, static_cast<std::uint64_t>(centre + span) + 1);
        const double lq = std::log(q), lr = std::log1p(-q), lt = std::lgamma(static_cast<double>(trials) + 1.0);
        std::vector<double> logp;
        logp.reserve(b - a + 1);
        double top = -INFINITY;
        for (std::uint64_t w = a; w <= b; ++w) {
            const double x = lt - std::lgamma(static_cast<double>(w) + 1.0) - std::lgamma(static_cast<double>(trials - w) + 1.0) +
                             static_cast<double>(w) * lq + static_cast<double>(trials - w) * lr;
            logp.push_back(x);
            top = std::max(top, x);
        }
        Table t{a, {}};
        t.cdf.reserve(logp.size());
        double acc = 0;
        for (double x : logp) {
            acc += std::exp(x - top);
            t.cdf.push_back(acc);
        }
        return cache_[key] = std::move(t);
    }

    std::map<std::tuple<std::uint64_t, double, std::uint64_t, std::uint64_t>, Table> cache_;
};

/// An element of G_2^(scale) described by per-leaf one counts at `leaf_scale`.
class BlockElement {
public:
    BlockElement(unsigned scale, unsigned leaf_scale) : scale_(scale), leaf_scale_(leaf_scale) {
        if (leaf_scale > scale) throw invalid_argument("leaf scale above element scale");
        if (leaf_scale > 24) throw cap_exceeded("block elements support at most 2^24 leaves");
        if (scale > 62) throw cap_exceeded("block elements support scales up to 62");
        ones_.assign(std::uint64_t{1} << leaf_scale, 0);
    }

    unsigned scale() const { return scale_; }
    unsigned leaf_scale() const { return leaf_scale_; }
    std::uint64_t leaves() const { return ones_.size(); }
    std::uint64_t leaf_bits() const { return std::uint64_t{1} << (scale_ - leaf_scale_); }
    std::uint64_t ones(std::uint64_t leaf) const { return ones_[leaf]; }

    /// Sets a leaf's count; only valid before any bit of it is revealed.
    void set_ones(std::uint64_t leaf, std::uint64_t c) {
        if (c > leaf_bits()) throw invalid_argument("leaf count exceeds leaf size");
        if (revealed_.count(leaf)) throw invalid_argument("leaf already has revealed bits");
        ones_[leaf] = c;
    }

    /// g embedded into this element's scale; requires g.n <= leaf_scale.
    static BlockElement from_element(const GroupElement& g, unsigned scale, unsigned leaf_scale) {
        if (g.p() != 2) throw invalid_argument("block elements are binary");
        if (g.n() > leaf_scale) throw invalid_argument("element scale above the leaf scale");
        BlockElement b(scale, leaf_scale);
        const unsigned shift = leaf_scale - g.n();
        for (std::uint64_t leaf = 0; leaf < b.leaves(); ++leaf) b.ones_[leaf] = g[leaf >> shift] ? b.leaf_bits() : 0;
        return b;
    }

    /// Ones among positions [first, first+len) of the element, for leaf-aligned ranges.
    std::uint64_t count_ones(std::uint64_t first, std::uint64_t len) const {
        const std::uint64_t bsize = leaf_bits();
        if (first % bsize || len % bsize) throw invalid_argument("block element counts need leaf-aligned ranges");
        std::uint64_t total = 0;
        for (std::uint64_t leaf = first / bsize; leaf < (first + len) / bsize; ++leaf) total += ones_[leaf];
        return total;
    }
    std::uint64_t count(std::uint32_t residue, std::uint64_t first, std::uint64_t len) const {
        const std::uint64_t o = count_ones(first, len);
        return residue == 1 ? o : len - o;
    }

    void complement_leaf(std::uint64_t leaf) {
        ones_[leaf] = leaf_bits() - ones_[leaf];
        if (auto it = revealed_.find(leaf); it != revealed_.end()) {
            for (auto& [off, bit] : it->second.bits) bit ^= 1u;
            it->second.ones = it->second.bits.size() - it->second.ones;
        }
    }

    /// Value of the bit at `pos` (ambient scale), revealed with its exact conditional law.
    std::uint8_t reveal(std::uint64_t pos, RandomStream& rng) {
        const std::uint64_t leaf = pos / leaf_bits(), off = pos % leaf_bits();
        auto& info = revealed_[leaf];
        if (auto it = info.bits.find(off); it != info.bits.end()) return it->second;
        const std::uint64_t hidden = leaf_bits() - info.bits.size();
        const std::uint64_t hidden_ones = ones_[leaf] - info.ones;
        const std::uint8_t bit = rng.chance(hidden_ones, hidden) ? 1 : 0;
        info.bits[off] = bit;
        info.ones += bit;
        return bit;
    }

    void flip(std::uint64_t pos, RandomStream& rng) {
        const std::uint8_t bit = reveal(pos, rng);
        const std::uint64_t leaf = pos / leaf_bits(), off = pos % leaf_bits();
        auto& info = revealed_[leaf];
        info.bits[off] = bit ^ 1u;
        if (bit) {
            --info.ones;
            --ones_[leaf];
        } else {
            ++info.ones;
            ++ones_[leaf];
        }
    }

    /// The element as a member of G_2^(s) when it is constant on scale-s cylinders (s <= leaf_scale).
    std::optional<GroupElement> project(unsigned s) const {
        if (s > leaf_scale_) return std::nullopt;
        if (s > GroupElement::max_scale) throw cap_exceeded("projection scale too large to materialize");
        const std::uint64_t per = std::uint64_t{1} << (leaf_scale_ - s);
        GroupElement g(2, s);
        for (std::uint64_t c = 0; c < g.size(); ++c) {
            const std::uint64_t v = ones_[c * per];
            if (v != 0 && v != leaf_bits()) return std::nullopt;
            for (std::uint64_t t = 1; t < per; ++t)
                if (ones_[c * per + t] != v) return std::nullopt;
            if (v) g.set(c, 1);
        }
        return g;
    }

    /// Explicit element, for small scales.
    GroupElement materialize(RandomStream& rng) {
        if (scale_ > 24) throw cap_exceeded("block element too large to materialize");
        GroupElement g(2, scale_);
        for (std::uint64_t pos = 0; pos < g.size(); ++pos)
            if (reveal(pos, rng)) g.set(pos, 1);
        return g;
    }

    json summary() const {
        json leaves = json::array();
        for (auto o : ones_) leaves.push_back(o);
        json rev = json::array();
        for (const auto& [leaf, info] : revealed_)
            for (const auto& [off, bit] : info.bits) rev.push_back({leaf * leaf_bits() + off, bit});
        return {{"scale", scale_}, {"leaf_scale", leaf_scale_}, {"leaf_ones", leaves}, {"revealed_bits", rev}};
    }

private:
    struct Revealed {
        std::map<std::uint64_t, std::uint8_t> bits;
        std::uint64_t ones = 0;
    };

    unsigned scale_;
    unsigned leaf_scale_;
    std::vector<std::uint64_t> ones_;
    std::map<std::uint64_t, Revealed> revealed_;
};

/// A member of center-free ball V(n, k) = 1 + U(n, k): the cylinders (at scale n) where it is 0.
struct BallDraw {
    unsigned n = 0;
    std::vector<std::uint64_t> zeros;
};

/// Uniform element of V(n, k), p = 2.
inline BallDraw draw_ball_V(unsigned n, std::uint64_t k, RandomStream& rng) {
    const std::uint64_t len = std::uint64_t{1} << n;
    k = std::min(k, len);
    mpz_class total = count_hamming(HammingBallSpec::U(2, n, k));
    mpz_class x = uniform_below(total, rng);
    std::uint64_t radius = 0;
    for (std::uint64_t r = 0; r <= k; ++r) {
        const mpz_class w = binomial(len, r);
        if (x < w) {
            radius = r;
            break;
        }
        x -= w;
    }
    BallDraw d{n, {}};
    while (d.zeros.size() < radius) {
        const std::uint64_t pos = rng.below(len);
        if (std::find(d.zeros.begin(), d.zeros.end(), pos) == d.zeros.end()) d.zeros.push_back(pos);
    }
    std::sort(d.zeros.begin(), d.zeros.end());
    return d;
}

/// x + v for v drawn from V(n, k). Needs n <= leaf scale or n == scale.
inline void add_ball_draw(BlockElement& x, const BallDraw& v, RandomStream& rng) {
    if (v.n == x.scale()) {
        for (std::uint64_t leaf = 0; leaf < x.leaves(); ++leaf) x.complement_leaf(leaf);
        for (auto pos : v.zeros) x.flip(pos, rng);
        return;
    }
    if (v.n > x.leaf_scale()) throw invalid_argument("ball scale strictly between leaf scale and element scale");
    const unsigned shift = x.leaf_scale() - v.n;
    for (std::uint64_t leaf = 0; leaf < x.leaves(); ++leaf)
        if (!std::binary_search(v.zeros.begin(), v.zeros.end(), leaf >> shift)) x.complement_leaf(leaf);
}

inline json describe(const BallDraw& v) { return {{"scale", v.n}, {"ones_except", v.zeros}}; }

inline bool in_niveau(const BlockElement& x, const NiveauSpec& spec) {
    if (spec.p() != 2 || spec.scale() != x.scale()) throw invalid_argument("block element and niveau spec disagree");
    auto count = [&x](std::uint32_t r, std::uint64_t first, std::uint64_t len) { return x.count(r, first, len); };
    return niveau_member(count, spec.i(), std::span<const ChainLevel>(spec.chain()));
}

/// Uniform random members (or non-members) of A_i(chain), p = 2.
class NiveauSampler {
public:
    explicit NiveauSampler(NiveauSpec spec, const Limits& limits = {}) : spec_(std::move(spec)) {
        if (spec_.p() != 2) throw invalid_argument("the niveau sampler is binary");
        const auto& c = spec_.chain();
        leaf_scale_ = c.size() >= 2 ? c[c.size() - 2].n : 0;
        // Probability that a block at level j (relative chain j..l) lies in its niveau set.
        for (std::size_t j = 1; j < c.size(); ++j) {
            std::vector<ChainLevel> rel;
            for (std::size_t t = j; t < c.size(); ++t) rel.push_back({c[t].n - c[j - 1].n, c[t].m});
            const Density d = density(NiveauSpec(2, 1, rel), limits);
            tail_q_.push_back(mpq_class((d.lower + d.upper) / 2).get_d());
        }
    }

    const NiveauSpec& spec() const { return spec_; }
    unsigned leaf_scale() const { return leaf_scale_; }

    BlockElement draw(RandomStream& rng, bool member = true) {
        BlockElement x(spec_.scale(), leaf_scale_);
        fill(x, 0, 0, member, rng);
        return x;
    }

    /// Explicit member at the chain's own scale (<= 24).
    GroupElement draw_explicit(RandomStream& rng, bool member = true) {
        if (spec_.scale() > 24) throw cap_exceeded("explicit draws need scale <= 24");
        auto b = draw(rng, member);
        GroupElement g(2, spec_.scale());
        const std::uint64_t bsize = b.leaf_bits();
        std::vector<std::uint64_t> idx(bsize);
        for (std::uint64_t leaf = 0; leaf < b.leaves(); ++leaf) {
            for (std::uint64_t t = 0; t < bsize; ++t) idx[t] = t;
            const std::uint64_t w = b.ones(leaf);
            for (std::uint64_t t = 0; t < w; ++t) {
                const std::uint64_t s = t + rng.below(bsize - t);
                std::swap(idx[t], idx[s]);
                g.set(leaf * bsize + idx[t], 1);
            }
        }
        return g;
    }

private:
    void fill(BlockElement& x, std::size_t level, std::uint64_t leaf_offset, bool member, RandomStream& rng) {
        const auto& c = spec_.chain();
        const unsigned base = level == 0 ? 0 : c[level - 1].n;
        const unsigned width = c[level].n - base;
        const std::uint64_t size = std::uint64_t{1} << width;
        const std::int64_t need = threshold_count(size, c[level].m);
        const std::uint64_t lo = member ? static_cast<std::uint64_t>(need) : 0;
        const std::uint64_t hi = member ? size : static_cast<std::uint64_t>(std::max<std::int64_t>(need - 1, -1));
        if (need > static_cast<std::int64_t>(size) && member) throw invalid_argument("cannot sample from an empty niveau set");
        if (!member && need == 0) throw invalid_argument("cannot sample from the empty complement of a niveau set");
        if (level + 1 == c.size()) {
            const std::uint64_t hits = binom_.draw(size, 0.5, lo, hi, rng);
            x.set_ones(leaf_offset, spec_.i() == 1 ? hits : size - hits);
            return;
        }
        const std::uint64_t hits = binom_.draw(size, tail_q_[level], lo, hi, rng);
        // A uniformly random set of `hits` blocks lies in the tail set.
        std::vector<std::uint64_t> order(size);
        for (std::uint64_t t = 0; t < size; ++t) order[t] = t;
        for (std::uint64_t t = 0; t < hits; ++t) std::swap(order[t], order[t + rng.below(size - t)]);
        std::vector<char> inside(size, 0);
        for (std::uint64_t t = 0; t < hits; ++t) inside[order[t]] = 1;
        const std::uint64_t per_block = std::uint64_t{1} << (leaf_scale_ - c[level].n);
        for (std::uint64_t b = 0; b < size; ++b) fill(x, level + 1, leaf_offset + b * per_block, inside[b] != 0, rng);
    }

    NiveauSpec spec_;
    unsigned leaf_scale_ = 0;
    std::vector<double> tail_q_;
    ConditionedBinomial binom_;
};

} // namespace recset
