#pragma once

// Explicit subsets of a small G_p^(n) (a bitmap over codes) and lazy membership predicates.

#include <bit>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "recset/codes.hpp"
#include "recset/core.hpp"
#include "recset/niveau.hpp"

namespace recset {

/// Lazy membership over G_p^(n). `by_code`, when present, answers the same
/// question for code-space members without building a GroupElement.
struct SetPredicate {
    std::uint32_t p = 2;
    unsigned n = 0;
    std::function<bool(const GroupElement&)> contains;
    std::function<bool(const CodeSpace&, std::uint64_t)> by_code;
    std::string description;

    bool operator()(const GroupElement& g) const { return contains(g); }
};

inline SetPredicate predicate(const NiveauSpec& spec) {
    SetPredicate s;
    s.p = spec.p();
    s.n = spec.scale();
    s.contains = [spec](const GroupElement& g) { return in_niveau(g, spec); };
    s.by_code = [spec](const CodeSpace& cs, std::uint64_t c) { return in_niveau(cs, c, spec); };
    s.description = "niveau " + spec.format();
    return s;
}

inline SetPredicate predicate(const HammingBallSpec& spec) {
    SetPredicate s;
    s.p = spec.p();
    s.n = spec.n();
    s.contains = [spec](const GroupElement& g) { return in_hamming(g, spec); };
    const GroupElement center = spec.center_at_scale();
    s.by_code = [center, k = spec.k()](const CodeSpace& cs, std::uint64_t c) {
        return in_hamming(cs, c, cs.code(center), k);
    };
    s.description = "ball " + spec.format();
    return s;
}

/// A bitmap over all codes of G_p^(n).
class FiniteSet {
public:
    FiniteSet(std::uint32_t p, unsigned n, const Limits& limits = {}) : space_(p, n, limits) {
        bits_.assign((space_.size() + 63) / 64, 0);
    }

    std::uint32_t p() const { return space_.p(); }
    unsigned n() const { return space_.n(); }
    const CodeSpace& space() const { return space_; }
    std::uint64_t universe() const { return space_.size(); }
    std::uint64_t cardinality() const { return cardinality_; }
    bool empty() const { return cardinality_ == 0; }

    bool contains(std::uint64_t code) const { return (bits_[code >> 6] >> (code & 63)) & 1u; }
    bool contains(const GroupElement& g) const { return contains(space_.code(g)); }

    void insert(std::uint64_t code) {
        const std::uint64_t mask = std::uint64_t{1} << (code & 63);
        if (!(bits_[code >> 6] & mask)) {
            bits_[code >> 6] |= mask;
            ++cardinality_;
        }
    }
    void insert(const GroupElement& g) { insert(space_.code(g)); }

    void erase(std::uint64_t code) {
        const std::uint64_t mask = std::uint64_t{1} << (code & 63);
        if (bits_[code >> 6] & mask) {
            bits_[code >> 6] &= ~mask;
            --cardinality_;
        }
    }

    /// Members in increasing code order.
    std::vector<std::uint64_t> members() const {
        std::vector<std::uint64_t> out;
        out.reserve(cardinality_);
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                out.push_back(w * 64 + static_cast<std::uint64_t>(std::countr_zero(word)));
                word &= word - 1;
            }
        }
        return out;
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                fn(w * 64 + static_cast<std::uint64_t>(std::countr_zero(word)));
                word &= word - 1;
            }
        }
    }

    FiniteSet& operator|=(const FiniteSet& o) { return combine(o, [](auto a, auto b) { return a | b; }); }
    FiniteSet& operator&=(const FiniteSet& o) { return combine(o, [](auto a, auto b) { return a & b; }); }
    FiniteSet& operator-=(const FiniteSet& o) { return combine(o, [](auto a, auto b) { return a & ~b; }); }
    friend FiniteSet operator|(FiniteSet a, const FiniteSet& b) { return a |= b; }
    friend FiniteSet operator&(FiniteSet a, const FiniteSet& b) { return a &= b; }
    friend FiniteSet operator-(FiniteSet a, const FiniteSet& b) { return a -= b; }

    bool subset_of(const FiniteSet& o) const {
        check_same(o);
        for (std::size_t w = 0; w < bits_.size(); ++w)
            if (bits_[w] & ~o.bits_[w]) return false;
        return true;
    }

    bool disjoint_from(const FiniteSet& o) const {
        check_same(o);
        for (std::size_t w = 0; w < bits_.size(); ++w)
            if (bits_[w] & o.bits_[w]) return false;
        return true;
    }

    /// First member of this set missing from `o`, if any.
    std::optional<std::uint64_t> first_outside(const FiniteSet& o) const {
        check_same(o);
        for (std::size_t w = 0; w < bits_.size(); ++w)
            if (const auto d = bits_[w] & ~o.bits_[w]) return w * 64 + static_cast<std::uint64_t>(std::countr_zero(d));
        return std::nullopt;
    }

    /// { a + t : a in this set }.
    FiniteSet translate(std::uint64_t t) const {
        FiniteSet r(space_);
        for_each([&](std::uint64_t c) { r.insert(space_.add(c, t)); });
        return r;
    }
    FiniteSet translate(const GroupElement& g) const { return translate(space_.code(g)); }

    /// { a + b : a in this set, b in o }.
    FiniteSet sumset(const FiniteSet& o) const {
        check_same(o);
        FiniteSet r(space_);
        const auto other = o.members();
        for_each([&](std::uint64_t a) {
            for (auto b : other) r.insert(space_.add(a, b));
        });
        return r;
    }

    friend bool operator==(const FiniteSet& a, const FiniteSet& b) {
        return a.p() == b.p() && a.n() == b.n() && a.bits_ == b.bits_;
    }

    /// Run-length encoded bitmap file. Header lines, then alternating run lengths
    /// starting with a run of non-members.
    void save(const std::string& path, const std::string& spec_text) const {
        std::ofstream out(path);
        if (!out) throw invalid_argument("cannot write " + path);
        out << "recset-finite-set 1\n"
            << "p " << p() << "\nn " << n() << "\ncardinality " << cardinality_ << "\nspec " << spec_text
            << "\nlibrary_version " << library_version << "\nruns";
        bool current = false;
        std::uint64_t run = 0;
        for (std::uint64_t c = 0; c < universe(); ++c) {
            if (contains(c) != current) {
                out << ' ' << run;
                current = !current;
                run = 0;
            }
            ++run;
        }
        out << ' ' << run << '\n';
    }

    struct Loaded;
    static Loaded load(const std::string& path, const Limits& limits = {});

private:
    explicit FiniteSet(const CodeSpace& space) : space_(space) { bits_.assign((space_.size() + 63) / 64, 0); }

    void check_same(const FiniteSet& o) const {
        if (p() != o.p() || n() != o.n()) throw invalid_argument("sets live in different groups");
    }

    template <class Op>
    FiniteSet& combine(const FiniteSet& o, Op op) {
        check_same(o);
        cardinality_ = 0;
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            bits_[w] = op(bits_[w], o.bits_[w]);
            cardinality_ += static_cast<std::uint64_t>(std::popcount(bits_[w]));
        }
        return *this;
    }

    CodeSpace space_;
    std::vector<std::uint64_t> bits_;
    std::uint64_t cardinality_ = 0;
};

struct FiniteSet::Loaded {
    FiniteSet set;
    std::string spec;
    std::string version;
};

inline FiniteSet::Loaded FiniteSet::load(const std::string& path, const Limits& limits) {
    std::ifstream in(path);
    if (!in) throw invalid_argument("cannot read " + path);
    std::string magic, key;
    int format = 0;
    in >> magic >> format;
    if (magic != "recset-finite-set" || format != 1) throw invalid_argument(path + " is not a finite-set file");
    std::uint32_t p = 0;
    unsigned n = 0;
    std::uint64_t card = 0;
    std::string spec, version;
    in >> key >> p >> key >> n >> key >> card >> key;
    in.get();
    std::getline(in, spec);
    in >> key >> version >> key;
    if (key != "runs") throw invalid_argument(path + ": malformed header");
    FiniteSet s(p, n, limits);
    std::uint64_t pos = 0, run = 0;
    bool current = false;
    while (in >> run) {
        if (current)
            for (std::uint64_t c = pos; c < pos + run; ++c) s.insert(c);
        pos += run;
        current = !current;
    }
    if (pos != s.universe()) throw invalid_argument(path + ": runs do not cover the group");
    if (s.cardinality() != card) throw invalid_argument(path + ": cardinality mismatch");
    return {std::move(s), spec, version};
}

inline FiniteSet materialize(const SetPredicate& pred, const Limits& limits = {}) {
    FiniteSet s(pred.p, pred.n, limits);
    const CodeSpace& cs = s.space();
    for (std::uint64_t c = 0; c < cs.size(); ++c) {
        const bool in = pred.by_code ? pred.by_code(cs, c) : pred.contains(cs.element(c));
        if (in) s.insert(c);
    }
    return s;
}

/// Minimum number of scale-s cylinders on which x must change to reach the set
/// (p = 2, s <= n); 255 marks "unreachable", which only happens for an empty set.
/// { x : dist[x] <= k } is exactly set + U(s, k) embedded at scale n.
inline std::vector<std::uint8_t> block_distance(const FiniteSet& set, unsigned s) {
    if (set.p() != 2) throw invalid_argument("block distances are computed for p = 2");
    if (s > set.n()) throw invalid_argument("block scale above the set scale");
    const std::uint64_t length = std::uint64_t{1} << set.n();
    const std::uint64_t width = std::uint64_t{1} << (set.n() - s);
    std::vector<std::uint64_t> masks;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << s); ++b) {
        std::uint64_t mask = 0;
        for (std::uint64_t j = b * width; j < (b + 1) * width; ++j) mask |= std::uint64_t{1} << (length - 1 - j);
        masks.push_back(mask);
    }
    std::vector<std::uint8_t> dist(set.universe(), 255);
    std::vector<std::uint64_t> frontier = set.members(), next;
    for (auto c : frontier) dist[c] = 0;
    for (std::uint8_t d = 1; !frontier.empty(); ++d) {
        next.clear();
        for (auto c : frontier)
            for (auto mask : masks)
                if (dist[c ^ mask] == 255) {
                    dist[c ^ mask] = d;
                    next.push_back(c ^ mask);
                }
        frontier.swap(next);
    }
    return dist;
}

/// Membership in an explicit set.
inline SetPredicate predicate(const FiniteSet& set, std::string description) {
    auto shared = std::make_shared<const FiniteSet>(set);
    SetPredicate s;
    s.p = set.p();
    s.n = set.n();
    s.contains = [shared](const GroupElement& g) { return shared->contains(g); };
    s.by_code = [shared](const CodeSpace&, std::uint64_t c) { return shared->contains(c); };
    s.description = std::move(description);
    return s;
}

inline FiniteSet materialize(const NiveauSpec& spec, const Limits& limits = {}) { return materialize(predicate(spec), limits); }
inline FiniteSet materialize(const HammingBallSpec& spec, const Limits& limits = {}) { return materialize(predicate(spec), limits); }

} // namespace recset
