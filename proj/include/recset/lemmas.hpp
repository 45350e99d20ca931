#pragma once

// Exhaustive checks of the niveau-set identities over every G_2^(n), n <= n_cap,
// plus the exact-arithmetic density estimates and the small chromatic facts.
// Each family of instances folds into one Verdict; the first failing instance
// becomes its witness.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "recset/construction.hpp"
#include "recset/counting.hpp"
#include "recset/finite_set.hpp"
#include "recset/niveau.hpp"
#include "recset/recurrence.hpp"
#include "recset/verdict.hpp"

namespace recset {

struct LemmaReport {
    unsigned n_cap = 0;
    std::vector<Verdict> verdicts;
    json findings = json::array();

    Status status() const { return combine(verdicts); }

    json to_json() const {
        json vs = json::array();
        for (const auto& v : verdicts) vs.push_back(v.to_json());
        return {{"n_cap", n_cap}, {"verdicts", vs}, {"findings", findings}, {"status", to_string(status())}};
    }
};

namespace detail {

/// One family of exhaustively checked instances.
class Family {
public:
    Family(std::string check, std::string oracle) : oracle_(std::move(oracle)) {
        v_.check = std::move(check);
        v_.mode = Mode::exhaustive;
    }

    void pass() { ++instances_; }

    void fail(json witness) {
        ++instances_;
        ++failures_;
        if (failures_ == 1) v_.witness = std::move(witness);
    }

    void check(bool ok, const std::function<json()>& witness) { ok ? pass() : fail(witness()); }

    Verdict finish() {
        v_.parameters["instances"] = instances_;
        v_.budget_spent["instances"] = instances_;
        if (failures_) {
            v_.status = Status::refuted;
            v_.parameters["failures"] = failures_;
            v_.certificate = oracle_ + ": counterexample found";
        } else {
            v_.status = Status::proven;
            v_.certificate = oracle_ + ": all " + std::to_string(instances_) + " instances hold";
            if (instances_ == 0) v_.warnings.push_back("no instances in range");
        }
        return v_;
    }

private:
    Verdict v_;
    std::string oracle_;
    std::uint64_t instances_ = 0;
    std::uint64_t failures_ = 0;
};

/// Materialized niveau sets by spec text.
class SetCache {
public:
    explicit SetCache(const Limits& limits) : limits_(limits) {}

    const FiniteSet& get(const NiveauSpec& spec) {
        const std::string key = spec.format();
        auto it = sets_.find(key);
        if (it == sets_.end()) it = sets_.emplace(key, materialize(spec, limits_)).first;
        return it->second;
    }

    const Limits& limits() const { return limits_; }

private:
    Limits limits_;
    std::map<std::string, FiniteSet> sets_;
};

/// Every strictly increasing sequence of scales in [1, n_cap] with the given length range.
inline std::vector<std::vector<unsigned>> scale_sequences(unsigned n_cap, std::size_t min_len, std::size_t max_len) {
    std::vector<std::vector<unsigned>> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n_cap); ++mask) {
        std::vector<unsigned> s;
        for (unsigned b = 0; b < n_cap; ++b)
            if (mask >> b & 1u) s.push_back(b + 1);
        if (s.size() >= min_len && s.size() <= max_len) out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// All margin vectors with m_j in [lo, 2^(width_j - 1)].
inline std::vector<std::vector<std::int64_t>> margin_vectors(const std::vector<unsigned>& scales, std::int64_t lo) {
    std::vector<std::vector<std::int64_t>> out{{}};
    unsigned prev = 0;
    for (auto n : scales) {
        const std::int64_t hi = std::int64_t{1} << (n - prev - 1);
        prev = n;
        std::vector<std::vector<std::int64_t>> grown;
        for (const auto& base : out)
            for (std::int64_t m = lo; m <= hi; ++m) {
                auto v = base;
                v.push_back(m);
                grown.push_back(std::move(v));
            }
        out.swap(grown);
    }
    return out;
}

inline std::vector<ChainLevel> make_chain(const std::vector<unsigned>& scales, const std::vector<std::int64_t>& margins) {
    std::vector<ChainLevel> c;
    for (std::size_t j = 0; j < scales.size(); ++j) c.push_back({scales[j], margins[j]});
    return c;
}

inline FiniteSet embed_set(const FiniteSet& s, unsigned top, const Limits& limits) {
    FiniteSet out(2, top, limits);
    s.for_each([&](std::uint64_t c) { out.insert(embed(s.space().element(c), top)); });
    return out;
}

/// The margin identities for one chain: ones translate, ball absorption (plain
/// and flipped), opposite-residue disjointness and margin monotonicity.
inline void chain_identities(const std::vector<ChainLevel>& chain, SetCache& cache, std::vector<Family>& fam) {
    const unsigned top = chain.back().n;
    const std::uint64_t ones = CodeSpace(2, top, cache.limits()).constant(1);
    for (std::uint32_t i = 0; i < 2; ++i) {
        const NiveauSpec spec(2, i, chain);
        const FiniteSet& a = cache.get(spec);
        const FiniteSet& flipped = cache.get(spec.with_residue(1 - i));
        fam[0].check(a.translate(ones) == flipped, [&] { return json{{"spec", spec.format()}}; });
        for (std::size_t j = 0; j < chain.size(); ++j) {
            const auto dist = block_distance(a, chain[j].n);
            for (std::int64_t m2 = 0; m2 <= chain[j].m; ++m2) {
                const NiveauSpec looser = spec.with_margin(j, m2);
                fam[4].check(a.subset_of(cache.get(looser)), [&] {
                    return json{{"spec", spec.format()}, {"looser", looser.format()}};
                });
            }
            for (std::int64_t k = 0; k < chain[j].m; ++k) {
                const NiveauSpec same = spec.with_margin(j, chain[j].m - k);
                const FiniteSet& same_set = cache.get(same);
                const FiniteSet& other_set = cache.get(same.with_residue(1 - i));
                std::int64_t bad_plain = -1, bad_flip = -1;
                for (std::uint64_t c = 0; c < a.universe(); ++c) {
                    if (dist[c] > k) continue;
                    if (bad_plain < 0 && !same_set.contains(c)) bad_plain = static_cast<std::int64_t>(c);
                    if (bad_flip < 0 && !other_set.contains(c ^ ones)) bad_flip = static_cast<std::int64_t>(c);
                }
                auto witness = [&](std::int64_t c, const NiveauSpec& target) {
                    return json{{"spec", spec.format()},
                                {"ball", HammingBallSpec::U(2, chain[j].n, static_cast<std::uint64_t>(k)).format()},
                                {"target", target.format()},
                                {"sum", a.space().element(static_cast<std::uint64_t>(c)).encode()}};
                };
                fam[1].check(bad_plain < 0, [&] { return witness(bad_plain, same); });
                fam[2].check(bad_flip < 0, [&] { return witness(bad_flip, same.with_residue(1 - i)); });
                fam[3].check(a.disjoint_from(other_set), [&] {
                    return json{{"spec", spec.format()}, {"other", same.with_residue(1 - i).format()}};
                });
            }
        }
    }
}

inline std::vector<Family> identity_families(const std::string& prefix, const std::string& oracle) {
    return {Family(prefix + "_ones_translate", oracle), Family(prefix + "_ball_absorption", oracle),
            Family(prefix + "_ball_absorption_flipped", oracle), Family(prefix + "_opposite_residue_disjoint", oracle),
            Family(prefix + "_margin_monotone", oracle)};
}

} // namespace detail

/// Every exhaustive identity at scales up to n_cap (at most 4 under the default cap).
inline LemmaReport lemma_suite(unsigned n_cap, const Limits& limits = {}, const Budget& budget = {}) {
    if (n_cap == 0) throw invalid_argument("n_cap must be at least 1");
    const CodeSpace probe(2, n_cap, limits);
    LemmaReport rep;
    rep.n_cap = n_cap;
    const std::string oracle = "enumeration of G_2^(n) for n <= " + std::to_string(n_cap);
    detail::SetCache cache(limits);

    // Single-level sets, 1 <= m <= 2^(n-1), 0 <= k < m, both residues.
    {
        auto fam = detail::identity_families("niveau", oracle);
        for (unsigned n = 1; n <= n_cap; ++n)
            for (std::int64_t m = 1; m <= (std::int64_t{1} << (n - 1)); ++m) detail::chain_identities({{n, m}}, cache, fam);
        for (auto& f : fam) rep.verdicts.push_back(f.finish());
    }

    // Chains of length >= 2 with every admissible margin.
    const auto chains = detail::scale_sequences(n_cap, 2, n_cap);
    {
        auto fam = detail::identity_families("chain", oracle);
        for (const auto& scales : chains)
            for (const auto& margins : detail::margin_vectors(scales, 1))
                detail::chain_identities(detail::make_chain(scales, margins), cache, fam);
        for (auto& f : fam) rep.verdicts.push_back(f.finish());
    }

    // Appending a level never shrinks the set, unless the appended level is empty.
    {
        detail::Family fam("chain_length_monotone", oracle);
        json vacuous_example = nullptr;
        std::uint64_t vacuous_failures = 0, vacuous_cases = 0;
        for (const auto& scales : chains)
            for (const auto& margins : detail::margin_vectors(scales, 1))
                for (std::uint32_t i = 0; i < 2; ++i) {
                    const NiveauSpec full(2, i, detail::make_chain(scales, margins));
                    const NiveauSpec shorter = full.prefix(full.levels() - 1);
                    const FiniteSet lifted = detail::embed_set(cache.get(shorter), full.scale(), limits);
                    const bool holds = lifted.subset_of(cache.get(full));
                    if (full.level_vacuous(full.levels() - 1)) {
                        ++vacuous_cases;
                        if (!holds && ++vacuous_failures == 1)
                            vacuous_example = {{"shorter", shorter.format()}, {"longer", full.format()},
                                               {"shorter_count", cache.get(shorter).cardinality()},
                                               {"longer_count", cache.get(full).cardinality()}};
                        continue;
                    }
                    fam.check(holds, [&] { return json{{"shorter", shorter.format()}, {"longer", full.format()}}; });
                }
        rep.verdicts.push_back(fam.finish());
        if (vacuous_failures)
            rep.findings.push_back({{"check", "chain_length_monotone"},
                                    {"finding", "containment fails when the appended level has 2m >= 2^(n_l - n_(l-1)); "
                                                "that level's base set is empty, so the longer chain's set is empty"},
                                    {"cases", vacuous_cases},
                                    {"failures", vacuous_failures},
                                    {"example", vacuous_example}});
    }

    // Block extensions G^(n_l)[g, m_l] for chains whose last two scales are 2 and 4.
    if (n_cap >= 4) {
        detail::Family inside("block_extension_containment", oracle), apart("block_extension_disjoint", oracle),
            size("block_extension_size", oracle);
        for (const auto& scales : chains) {
            if (scales.back() != 4 || scales[scales.size() - 2] != 2) continue;
            for (const auto& margins : detail::margin_vectors(scales, 1))
                for (std::uint32_t i = 0; i < 2; ++i) {
                    const NiveauSpec full(2, i, detail::make_chain(scales, margins));
                    const NiveauSpec shorter = full.prefix(full.levels() - 1);
                    const FiniteSet& base = cache.get(shorter);
                    const FiniteSet& target = cache.get(full);
                    const std::int64_t ml = margins.back();
                    const mpz_class block = count_base_niveau(2, 2, ml);
                    std::vector<std::int64_t> owner(target.universe(), -1);
                    const CodeSpace big(2, 4, limits);
                    base.for_each([&](std::uint64_t gc) {
                        const GroupElement g = base.space().element(gc);
                        std::uint64_t members = 0;
                        bool contained = true, disjoint = true;
                        for (std::uint64_t hc = 0; hc < big.size(); ++hc) {
                            if (!in_block_extension(big.element(hc), g, ml)) continue;
                            ++members;
                            if (!target.contains(hc)) contained = false;
                            if (owner[hc] >= 0) disjoint = false;
                            owner[hc] = static_cast<std::int64_t>(gc);
                        }
                        const json w = {{"chain", full.format()}, {"g", g.encode()}};
                        inside.check(contained, [&] { return w; });
                        apart.check(disjoint, [&] { return w; });
                        size.check(mpz_class(members) == power(block.get_ui(), 4), [&] {
                            json x = w;
                            x["members"] = members;
                            x["expected"] = mpz_class(power(block.get_ui(), 4)).get_str();
                            return x;
                        });
                    });
                }
        }
        rep.verdicts.push_back(inside.finish());
        rep.verdicts.push_back(apart.finish());
        rep.verdicts.push_back(size.finish());
    }

    // Exact counts agree with enumeration on every chain, margins from 0.
    {
        detail::Family fam("count_matches_enumeration", oracle);
        for (const auto& scales : detail::scale_sequences(n_cap, 1, n_cap))
            for (const auto& margins : detail::margin_vectors(scales, 0))
                for (std::uint32_t i = 0; i < 2; ++i) {
                    const NiveauSpec spec(2, i, detail::make_chain(scales, margins));
                    const mpz_class c = count_niveau(spec, limits);
                    const auto e = cache.get(spec).cardinality();
                    fam.check(c == mpz_class(std::to_string(e)), [&] {
                        return json{{"spec", spec.format()}, {"count", c.get_str()}, {"enumerated", e}};
                    });
                }
        rep.verdicts.push_back(fam.finish());
    }

    // Base densities rise towards 1/2, within (2m + 1) C(2^n, 2^(n-1)) / 2^(2^n) of it.
    {
        detail::Family rising("base_density_increasing", "exact rational densities"),
            gap("base_density_gap_bound", "exact rational densities");
        for (std::int64_t m = 1; m <= 3; ++m) {
            mpq_class prev = -1;
            for (unsigned n = 3; n <= 12; ++n) {
                const Density d = density(NiveauSpec::base(2, 1, n, m), limits);
                const std::uint64_t len = std::uint64_t{1} << n;
                const mpq_class bound(mpz_class(2 * m + 1) * binomial(len, len / 2), power(2, len));
                const json w = {{"n", n}, {"m", m}, {"density", to_decimal(d.lower)}};
                rising.check(d.lower > prev, [&] { return w; });
                gap.check(mpq_class(mpq_class(1, 2) - d.lower) <= bound, [&] { return w; });
                prev = d.lower;
            }
        }
        rep.verdicts.push_back(rising.finish());
        rep.verdicts.push_back(gap.finish());
    }

    // Appending a wide level keeps at least prefix density times (2q)^N, q the block density.
    {
        detail::Family fam("chain_density_lower_bound", "exact rational densities");
        for (const auto& prefix : std::vector<std::vector<ChainLevel>>{{{2, 1}}, {{3, 1}}, {{2, 1}, {3, 0}}})
            for (unsigned delta = 4; delta <= 12; ++delta)
                for (std::int64_t m = 1; m <= 3; ++m) {
                    auto c = prefix;
                    c.push_back({prefix.back().n + delta, m});
                    const NiveauSpec full(2, 1, c), shorter(2, 1, prefix);
                    const Density d = density(full, limits), d0 = density(shorter, limits);
                    const Density q = density(NiveauSpec::base(2, 1, delta, m), limits);
                    mpq_class factor = 1;
                    const mpq_class two_q = 2 * q.lower;
                    for (std::uint64_t t = 0; t < (std::uint64_t{1} << prefix.back().n); ++t) factor *= two_q;
                    const mpq_class bound = d0.lower * factor;
                    fam.check(d.exact && d.lower >= bound, [&] {
                        return json{{"chain", full.format()}, {"density", to_decimal(d.lower)}, {"bound", to_decimal(bound)}};
                    });
                }
        rep.verdicts.push_back(fam.finish());
    }

    // Sums of balls and dense sets land in the pushed sets, on every small parameter set.
    {
        std::map<std::string, detail::Family> fams;
        for (const auto& scales : detail::scale_sequences(n_cap, 1, 2))
            for (const auto& margins : detail::margin_vectors(scales, 1)) {
                const NiveauSpec spec(2, 1, detail::make_chain(scales, margins));
                if (niveau_empty(spec)) continue;
                std::vector<std::vector<std::uint64_t>> ks{{}};
                for (auto m : margins) {
                    std::vector<std::vector<std::uint64_t>> grown;
                    for (const auto& base : ks)
                        for (std::int64_t k = 0; k < m; ++k) {
                            auto v = base;
                            v.push_back(static_cast<std::uint64_t>(k));
                            grown.push_back(std::move(v));
                        }
                    ks.swap(grown);
                }
                for (const auto& k : ks) {
                    ConstructionParams params;
                    params.k = k;
                    params.m = margins;
                    params.n = scales;
                    // The difference checks need 2(m_j - k_j) > k_j; containments hold for every k_j < m_j.
                    bool wide = true;
                    for (std::size_t j = 0; j < k.size(); ++j)
                        if (2 * (margins[j] - static_cast<std::int64_t>(k[j])) <= static_cast<std::int64_t>(k[j])) wide = false;
                    const WitnessReport wr = verify_exhaustive(params, limits, 1, false);
                    for (const auto& v : wr.verdicts) {
                        if (!wide && v.check.find("containment") == std::string::npos) continue;
                        auto it = fams.try_emplace("construction_" + v.check, "construction_" + v.check, oracle).first;
                        it->second.check(!v.refuted(), [&] {
                            return json{{"params", params.to_json()}, {"verdict", v.to_json()}};
                        });
                    }
                }
            }
        for (auto& [name, f] : fams) rep.verdicts.push_back(f.finish());
    }

    // Chromatic facts at these scales.
    for (unsigned n = 3; n <= n_cap; ++n) rep.verdicts.push_back(verify_poincare(2, n, 2, budget, false, limits));
    if (n_cap >= 4)
        for (std::uint32_t x = 0; x < 2; ++x)
            rep.verdicts.push_back(verify_translate_claim(4, 2, make_constant(2, 4, x), budget, limits));
    for (auto [r, k] : std::vector<std::pair<unsigned, unsigned>>{{1, 1}, {1, 2}, {2, 1}, {2, 2}})
        rep.verdicts.push_back(verify_lovasz(r, k, budget));
    return rep;
}

} // namespace recset
