#pragma once

// The truncated construction over G_2: S = union of V(n_j, k_j), A = union of
// A_1 over the prefixes of ((n_1, m_1), ..., (n_L, m_L)) with m_j = 3 k_j, and
// the pushed set A' = union of A_0 over prefixes with margins m_j - k_j.
// Checks (A - A) ∩ S = ∅, (A' - A') ∩ S = ∅, S + A ⊆ A', A ∩ (A + 1) = ∅ and
// the per-level densities against 1/2 - epsilon.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recset/counting.hpp"
#include "recset/finite_set.hpp"
#include "recset/niveau.hpp"
#include "recset/random.hpp"
#include "recset/recurrence.hpp"
#include "recset/sampler.hpp"
#include "recset/verdict.hpp"

namespace recset {

/// "0.1", "1/10" or "3" as an exact rational.
inline mpq_class parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw invalid_argument("empty rational");
    mpq_class q;
    try {
        if (const auto dot = s.find('.'); dot != std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            if (digits.empty() || digits == "-") throw invalid_argument("malformed decimal '" + s + "'");
            q = mpq_class(mpz_class(digits), power(10, s.size() - dot - 1));
        } else {
            q = mpq_class(s);
        }
    } catch (const std::invalid_argument&) {
        throw invalid_argument("malformed rational '" + s + "'");
    }
    if (q.get_den() == 0) throw invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

inline json density_json(const Density& d) {
    if (d.exact) return {{"exact", true}, {"value", to_fraction(d.lower)}, {"decimal", to_decimal(d.lower)}};
    return {{"exact", false},
            {"lower", to_fraction(d.lower)},
            {"upper", to_fraction(d.upper)},
            {"lower_decimal", to_decimal(d.lower)},
            {"upper_decimal", to_decimal(d.upper)}};
}

struct ConstructionParams {
    mpq_class epsilon{1, 10};
    std::vector<std::uint64_t> k;
    std::vector<std::int64_t> m;
    std::vector<unsigned> n;

    std::size_t levels() const { return k.size(); }
    unsigned top_scale() const { return n.back(); }

    static ConstructionParams make(mpq_class epsilon, std::vector<std::uint64_t> k, std::vector<unsigned> n) {
        ConstructionParams p;
        p.epsilon = std::move(epsilon);
        p.k = std::move(k);
        for (auto kj : p.k) p.m.push_back(3 * static_cast<std::int64_t>(kj));
        p.n = std::move(n);
        p.validate();
        return p;
    }

    void validate() const {
        if (k.empty()) throw invalid_argument("at least one level is required");
        if (m.size() != k.size() || n.size() != k.size()) throw invalid_argument("k, m and n sequences differ in length");
        for (std::size_t j = 0; j < k.size(); ++j) {
            if (m[j] <= static_cast<std::int64_t>(k[j])) throw invalid_argument("margins must exceed radii");
            if (j > 0 && n[j] <= n[j - 1]) throw invalid_argument("scales must be strictly increasing");
        }
        if (n.front() == 0) throw invalid_argument("scales start at 1");
        if (epsilon <= 0 || epsilon >= mpq_class(1, 2)) throw invalid_argument("epsilon must lie in (0, 1/2)");
    }

    /// A_i((n_1, m_1), ..., (n_l, m_l)), l counted from 1.
    NiveauSpec dense_set(std::size_t l, std::uint32_t i = 1) const {
        std::vector<ChainLevel> c;
        for (std::size_t j = 0; j < l; ++j) c.push_back({n[j], m[j]});
        return {2, i, std::move(c)};
    }

    /// A_i((n_1, m_1 - k_1), ..., (n_l, m_l - k_l)).
    NiveauSpec pushed_set(std::size_t l, std::uint32_t i = 0) const {
        std::vector<ChainLevel> c;
        for (std::size_t j = 0; j < l; ++j) c.push_back({n[j], m[j] - static_cast<std::int64_t>(k[j])});
        return {2, i, std::move(c)};
    }

    HammingBallSpec ball(std::size_t j) const { return HammingBallSpec::V(2, n[j - 1], k[j - 1]); }

    mpq_class target() const { return mpq_class(1, 2) - epsilon; }

    json to_json() const {
        return {{"epsilon", to_fraction(epsilon)}, {"k", k}, {"m", m}, {"n", n}};
    }

    static ConstructionParams from_json(const json& j) {
        ConstructionParams p;
        p.epsilon = parse_rational(j.at("epsilon").get<std::string>());
        p.k = j.at("k").get<std::vector<std::uint64_t>>();
        p.m = j.at("m").get<std::vector<std::int64_t>>();
        p.n = j.at("n").get<std::vector<unsigned>>();
        p.validate();
        return p;
    }
};

/// Empty exactly when some level's threshold exceeds its block count.
inline bool niveau_empty(const NiveauSpec& s) {
    for (std::size_t j = 0; j < s.levels(); ++j)
        if (s.level_vacuous(j)) return true;
    return false;
}

struct ScaleScan {
    std::size_t level = 0;
    unsigned n = 0;
    Density density;
};

struct ScaleChoice {
    ConstructionParams params;
    std::vector<ScaleScan> scan;
};

/// Smallest scales, level by level, whose niveau density reaches 1/2 - epsilon.
inline ScaleChoice choose_scales(const mpq_class& epsilon, const std::vector<std::uint64_t>& k, unsigned n_cap,
                                 const Limits& limits = {}) {
    if (epsilon <= 0 || epsilon >= mpq_class(1, 2)) throw invalid_argument("epsilon must lie in (0, 1/2)");
    if (k.empty()) throw invalid_argument("at least one level is required");
    for (std::size_t j = 0; j < k.size(); ++j) {
        if (k[j] == 0) throw invalid_argument("radii k_j must be positive");
        if (j > 0 && k[j] <= k[j - 1]) throw invalid_argument("radii k_j must be strictly increasing");
    }
    if (n_cap > 62) throw invalid_argument("scale cap above 62");
    const mpq_class target = mpq_class(1, 2) - epsilon;
    ScaleChoice out;
    out.params.epsilon = epsilon;
    out.params.k = k;
    for (auto kj : k) out.params.m.push_back(3 * static_cast<std::int64_t>(kj));
    for (std::size_t l = 0; l < k.size(); ++l) {
        const unsigned start = l == 0 ? 1 : out.params.n.back() + 1;
        if (l > 0 && out.params.n.back() > 24)
            throw cap_exceeded("cap exhausted at level " + std::to_string(l + 1) + ": the previous scale " +
                               std::to_string(out.params.n.back()) + " leaves more than 2^24 blocks");
        std::optional<ScaleScan> best;
        bool found = false;
        for (unsigned n = start; n <= n_cap; ++n) {
            std::vector<ChainLevel> c;
            for (std::size_t j = 0; j < l; ++j) c.push_back({out.params.n[j], out.params.m[j]});
            c.push_back({n, out.params.m[l]});
            const NiveauSpec spec(2, 1, std::move(c));
            ScaleScan entry{l + 1, n, niveau_empty(spec) ? Density::point(0) : density(spec, limits)};
            out.scan.push_back(entry);
            if (!best || entry.density.upper > best->density.upper) best = entry;
            if (entry.density.lower >= target) {
                out.params.n.push_back(n);
                found = true;
                break;
            }
        }
        if (!found) {
            std::string msg = "cap exhausted at level " + std::to_string(l + 1) + " (scale cap " + std::to_string(n_cap) +
                              "): target density " + to_decimal(target);
            if (best) msg += ", best density " + to_decimal(best->density.upper) + " at scale " + std::to_string(best->n);
            throw cap_exceeded(msg);
        }
    }
    out.params.validate();
    return out;
}

/// S truncated at L levels, as a predicate at scale n_L.
inline SetPredicate witness_S(const ConstructionParams& params) {
    SetPredicate s;
    s.p = 2;
    s.n = params.top_scale();
    s.contains = [params](const GroupElement& g) {
        for (std::size_t j = 1; j <= params.levels(); ++j) {
            const auto h = coarsen(g, params.n[j - 1]);
            if (h && in_hamming(*h, params.ball(j))) return true;
        }
        return false;
    };
    std::string d = "union of";
    for (std::size_t j = 1; j <= params.levels(); ++j) d += " " + params.ball(j).format();
    s.description = d;
    return s;
}

/// Level-l dense set A_1(n_1..n_l), at scale n_l.
inline SetPredicate witness_A(const ConstructionParams& params, std::size_t level) {
    if (level == 0 || level > params.levels()) throw invalid_argument("level out of range");
    return predicate(params.dense_set(level));
}

namespace detail {

/// The union over levels r of the given niveau sets, embedded at scale n_L.
inline FiniteSet embedded_union(const std::vector<NiveauSpec>& specs, unsigned top, const Limits& limits) {
    FiniteSet out(2, top, limits);
    for (const auto& spec : specs) {
        const FiniteSet level = materialize(spec, limits);
        level.for_each([&](std::uint64_t c) { out.insert(embed(level.space().element(c), top)); });
    }
    return out;
}

inline void insert_embedded(FiniteSet& out, const HammingBallSpec& spec, const Limits& limits) {
    const FiniteSet ball = materialize(spec, limits);
    ball.for_each([&](std::uint64_t c) { out.insert(embed(ball.space().element(c), out.n())); });
}

inline FiniteSet embedded_balls(const ConstructionParams& params, const Limits& limits) {
    FiniteSet out(2, params.top_scale(), limits);
    for (std::size_t j = 1; j <= params.levels(); ++j) insert_embedded(out, params.ball(j), limits);
    return out;
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return seed + 0x9E3779B97F4A7C15ull * (stream + 1);
}

/// Draws of niveau members as block elements at the top scale.
class LevelDraws {
public:
    LevelDraws(const ConstructionParams& params, bool pushed, const Limits& limits) : params_(params), pushed_(pushed) {
        leaf_ = params.levels() >= 2 ? params.n[params.levels() - 2] : 0;
        for (std::size_t l = 1; l <= params.levels(); ++l) {
            const NiveauSpec s = spec(l);
            empty_.push_back(niveau_empty(s));
            samplers_.emplace_back(s, limits);
        }
    }

    NiveauSpec spec(std::size_t l) const { return pushed_ ? params_.pushed_set(l, 0) : params_.dense_set(l, 1); }
    bool empty(std::size_t l) const { return empty_[l - 1]; }
    unsigned leaf_scale() const { return leaf_; }

    BlockElement draw(std::size_t l, RandomStream& rng) {
        auto& s = samplers_[l - 1];
        if (l == params_.levels()) return s.draw(rng);
        return BlockElement::from_element(s.draw_explicit(rng), params_.top_scale(), leaf_);
    }

    /// Membership of x in level r's set (x must lie in G^(n_r)).
    bool in_level(const BlockElement& x, std::size_t r) const {
        if (empty_[r - 1]) return false;
        if (r == params_.levels()) return in_niveau(x, spec(r));
        const auto g = x.project(params_.n[r - 1]);
        return g && in_niveau(*g, spec(r));
    }

    bool in_union(const BlockElement& x) const {
        for (std::size_t r = 1; r <= params_.levels(); ++r)
            if (in_level(x, r)) return true;
        return false;
    }

private:
    const ConstructionParams& params_;
    bool pushed_;
    unsigned leaf_ = 0;
    std::vector<bool> empty_;
    std::vector<NiveauSampler> samplers_;
};

inline json level_list(const std::vector<std::size_t>& v) {
    json j = json::array();
    for (auto x : v) j.push_back(x);
    return j;
}

} // namespace detail

struct WitnessReport {
    ConstructionParams params;
    Mode mode = Mode::exhaustive;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::vector<Verdict> verdicts;
    json levels = json::array();
    json e_report = json::array();
    json scale_scan = nullptr;
    std::vector<std::string> warnings;
    std::optional<json> exhaustive_analog;
    bool target_checked = true;

    Status status() const { return combine(verdicts); }

    json to_json() const {
        json j;
        j["params"] = params.to_json();
        j["truncation_levels"] = params.levels();
        j["mode"] = to_string(mode);
        if (mode == Mode::sampled) {
            j["seed"] = seed;
            j["trials"] = trials;
            j["rng"] = RandomStream::algorithm;
        }
        j["density_target"] = {{"value", to_fraction(params.target())},
                               {"decimal", to_decimal(params.target())},
                               {"checked", target_checked}};
        j["levels"] = levels;
        if (!scale_scan.is_null()) j["scale_scan"] = scale_scan;
        json vs = json::array();
        for (const auto& v : verdicts) vs.push_back(v.to_json());
        j["verdicts"] = vs;
        j["e_report"] = e_report;
        j["warnings"] = warnings;
        if (exhaustive_analog) j["exhaustive_analog"] = *exhaustive_analog;
        j["status"] = to_string(status());
        return j;
    }
};

inline json scan_json(const std::vector<ScaleScan>& scan) {
    json out = json::array();
    for (const auto& s : scan) out.push_back({{"level", s.level}, {"n", s.n}, {"density", density_json(s.density)}});
    return out;
}

/// Per-level densities against 1/2 - epsilon, plus the E = A ∪ (A + 1) counts.
inline void report_densities(WitnessReport& rep, const Limits& limits, bool check_target = true) {
    const auto& params = rep.params;
    const mpq_class target = params.target();
    rep.target_checked = check_target;
    for (std::size_t l = 1; l <= params.levels(); ++l) {
        const NiveauSpec spec = params.dense_set(l);
        const bool empty = niveau_empty(spec);
        const Density d = empty ? Density::point(0) : density(spec, limits);
        Verdict v;
        v.check = "level_density";
        v.mode = Mode::exhaustive;
        v.parameters = {{"level", l}, {"spec", spec.format()}, {"target", to_fraction(target)}};
        if (d.lower >= target) {
            v.status = Status::proven;
            v.certificate = d.exact ? "exact count of the niveau set" : "certified interval enclosure of the niveau density";
        } else if (d.upper < target) {
            v.status = Status::refuted;
            v.certificate = d.exact ? "exact count of the niveau set" : "certified interval enclosure of the niveau density";
            v.witness = density_json(d);
        } else {
            v.status = Status::inconclusive;
            v.budget_exhausted = true;
            v.warnings.push_back("density enclosure straddles the target at the working precision");
        }
        if (check_target) rep.verdicts.push_back(v);
        json lv = {{"level", l},
                   {"n", params.n[l - 1]},
                   {"k", params.k[l - 1]},
                   {"m", params.m[l - 1]},
                   {"spec", spec.format()},
                   {"density", density_json(d)},
                   {"meets_target", d.lower >= target},
                   {"degenerate", empty}};
        rep.levels.push_back(lv);

        // A + 1 = A_0 of the same chain, which has the same count and is disjoint from A_1.
        json e = {{"level", l}, {"scale", params.n[l - 1]}};
        if (d.exact && !empty && spec.scale() <= 62 && group_bits(2, spec.scale()) <= static_cast<double>(limits.exact_bits_cap)) {
            const mpz_class a1 = count_niveau(spec, limits);
            const mpz_class a0 = count_niveau(spec.with_residue(0), limits);
            const mpz_class e_count = a1 + a0;
            e["exact"] = true;
            e["count_A"] = a1.get_str();
            e["count_A_plus_ones"] = a0.get_str();
            e["count_E"] = e_count.get_str();
            e["E_equals_twice_A"] = e_count == 2 * a1;
            e["density_E"] = density_json(Density::point(mpq_class(e_count, group_order(2, spec.scale(), limits))));
        } else if (empty) {
            e["exact"] = true;
            e["count_A"] = "0";
            e["count_E"] = "0";
            e["E_equals_twice_A"] = true;
        } else {
            e["exact"] = false;
            e["density_E"] = density_json(Density{2 * d.lower, 2 * d.upper, false});
            e["E_equals_twice_A"] = true;
            e["note"] = "A + 1 is the residue-0 set of the same chain; both counts share one formula, so |E| = 2|A| holds "
                        "by the disjointness check while only an interval for the density is computed";
        }
        rep.e_report.push_back(e);
    }
}

/// Every check by enumeration of G_2^(n_L).
inline WitnessReport verify_exhaustive(const ConstructionParams& params, const Limits& limits = {}, unsigned threads = 1,
                                       bool check_target = true) {
    params.validate();
    const unsigned top = params.top_scale();
    const CodeSpace probe(2, top, limits); // throws with the cap in the message when too large
    WitnessReport rep;
    rep.params = params;
    rep.mode = Mode::exhaustive;
    const std::string oracle = "enumeration of G_2^(" + std::to_string(top) + ")";

    std::vector<NiveauSpec> dense, pushed;
    for (std::size_t l = 1; l <= params.levels(); ++l) {
        dense.push_back(params.dense_set(l));
        pushed.push_back(params.pushed_set(l));
    }
    const FiniteSet A = detail::embedded_union(dense, top, limits);
    const FiniteSet Ap = detail::embedded_union(pushed, top, limits);
    const FiniteSet S = detail::embedded_balls(params, limits);
    const SetPredicate s_pred = predicate(S, witness_S(params).description);
    if (A.empty()) rep.warnings.push_back("degenerate parameters: A is empty, every check holds vacuously");

    auto tag = [&](Verdict v, std::string check) {
        v.check = std::move(check);
        v.certificate = oracle + ": " + v.certificate;
        if (A.empty()) v.warnings.push_back("vacuous: A is empty");
        return v;
    };
    rep.verdicts.push_back(tag(difference_avoids(A, s_pred, threads), "difference_avoidance"));
    rep.verdicts.push_back(tag(difference_avoids(Ap, s_pred, threads), "pushed_difference_avoidance"));

    for (std::size_t j = 1; j <= params.levels(); ++j) {
        FiniteSet Vj(2, top, limits);
        detail::insert_embedded(Vj, params.ball(j), limits);
        for (std::size_t l = 1; l <= params.levels(); ++l) {
            const std::size_t r = std::max(j, l);
            const FiniteSet Al = detail::embedded_union({params.dense_set(l)}, top, limits);
            const FiniteSet target = detail::embedded_union({params.pushed_set(r)}, top, limits);
            const FiniteSet sum = Vj.sumset(Al);
            Verdict v;
            v.check = "push_containment";
            v.mode = Mode::exhaustive;
            v.parameters = {{"ball_level", j}, {"set_level", l}, {"target_level", r}, {"target", params.pushed_set(r).format()}};
            v.budget_spent["pairs"] = Vj.cardinality() * Al.cardinality();
            if (const auto miss = sum.first_outside(target)) {
                v.status = Status::refuted;
                v.certificate = oracle + ": sum outside the pushed set";
                v.witness = {{"sum", sum.space().element(*miss).encode()}};
            } else {
                v.status = Status::proven;
                v.certificate = oracle + ": every sum of a ball element and a set element lies in the pushed set";
            }
            if (Al.empty()) v.warnings.push_back("vacuous: level set is empty");
            rep.verdicts.push_back(v);
        }
    }

    // Literal sumset oracle: A + S inside A' and itself avoiding S in differences.
    const FiniteSet AS = A.sumset(S);
    {
        Verdict v;
        v.check = "literal_sumset_containment";
        v.mode = Mode::exhaustive;
        v.budget_spent["pairs"] = A.cardinality() * S.cardinality();
        if (const auto miss = AS.first_outside(Ap)) {
            v.status = Status::refuted;
            v.certificate = oracle + ": element of A + S outside the pushed set";
            v.witness = {{"sum", AS.space().element(*miss).encode()}};
        } else {
            v.status = Status::proven;
            v.certificate = oracle + ": A + S is contained in the pushed set";
        }
        rep.verdicts.push_back(v);
    }
    rep.verdicts.push_back(tag(difference_avoids(AS, s_pred, threads), "literal_sumset_avoidance"));

    {
        const FiniteSet shifted = A.translate(make_ones(2, top));
        const FiniteSet E = A | shifted;
        Verdict v;
        v.check = "shift_disjointness";
        v.mode = Mode::exhaustive;
        if (const auto both = (A & shifted).members(); !both.empty()) {
            v.status = Status::refuted;
            v.certificate = oracle + ": A meets A + 1";
            v.witness = {{"element", A.space().element(both.front()).encode()}};
        } else {
            v.status = Status::proven;
            v.certificate = oracle + ": A and A + 1 are disjoint";
        }
        rep.verdicts.push_back(v);
        rep.e_report.push_back({{"union_at_scale", top},
                                {"exact", true},
                                {"count_A", A.cardinality()},
                                {"count_E", E.cardinality()},
                                {"E_equals_twice_A", E.cardinality() == 2 * A.cardinality()},
                                {"density_A", density_json(Density::point(mpq_class(A.cardinality(), A.universe())))},
                                {"density_E", density_json(Density::point(mpq_class(E.cardinality(), E.universe())))}});
    }
    report_densities(rep, limits, check_target);
    return rep;
}

/// The same checks on random pairs; sets at the top scale are handled as block elements.
inline WitnessReport verify_sampled(const ConstructionParams& params, std::uint64_t trials, std::uint64_t seed,
                                    const Limits& limits = {}, bool check_target = true) {
    params.validate();
    if (trials == 0) throw invalid_argument("trials must be at least 1");
    if (params.levels() >= 2 && params.n[params.levels() - 2] > 24)
        throw cap_exceeded("sampling needs the second-to-last scale at most 24");
    WitnessReport rep;
    rep.params = params;
    rep.mode = Mode::sampled;
    rep.seed = seed;
    rep.trials = trials;
    const std::size_t L = params.levels();

    detail::LevelDraws dense(params, false, limits), pushed(params, true, limits);
    std::vector<std::size_t> live, live_pushed;
    for (std::size_t l = 1; l <= L; ++l) {
        if (!dense.empty(l)) live.push_back(l);
        if (!pushed.empty(l)) live_pushed.push_back(l);
    }
    if (live.empty()) rep.warnings.push_back("degenerate parameters: A is empty, every check holds vacuously");

    std::uint64_t stream = 0;
    auto sampled_verdict = [&](const std::string& check, std::uint64_t n_trials) {
        Verdict v;
        v.check = check;
        v.mode = Mode::sampled;
        v.parameters = {{"trials", n_trials}, {"seed", seed}, {"stream", stream}, {"rng", RandomStream::algorithm}};
        return v;
    };

    // Differences within a set versus S: a + s must leave the set.
    auto difference_check = [&](detail::LevelDraws& draws, const std::vector<std::size_t>& levels, const std::string& check,
                                const std::string& set_name) {
        Verdict v = sampled_verdict(check, trials);
        v.parameters["set"] = set_name;
        v.parameters["set_levels"] = detail::level_list(levels);
        RandomStream rng(detail::stream_seed(seed, stream++));
        std::uint64_t done = 0;
        if (!levels.empty()) {
            for (; done < trials; ++done) {
                const std::size_t l = levels[done % levels.size()];
                const std::size_t j = 1 + (done / levels.size()) % L;
                const BlockElement a = draws.draw(l, rng);
                const BallDraw s = draw_ball_V(params.n[j - 1], params.k[j - 1], rng);
                BlockElement x = a;
                add_ball_draw(x, s, rng);
                if (draws.in_union(x)) {
                    v.status = Status::refuted;
                    v.certificate = "sampled a in the set and s in S with a + s in the set";
                    v.witness = {{"trial", done}, {"set_level", l}, {"ball_level", j}, {"a", a.summary()}, {"s", describe(s)}};
                    ++done;
                    break;
                }
            }
        } else {
            v.warnings.push_back("vacuous: the set is empty");
        }
        v.budget_spent["pairs"] = done;
        if (!v.refuted()) {
            v.status = levels.empty() ? Status::proven : Status::inconclusive;
            v.certificate = levels.empty() ? "empty set" : "no violation in " + std::to_string(done) + " sampled pairs";
        }
        rep.verdicts.push_back(v);
    };

    difference_check(dense, live, "difference_avoidance", "A");
    difference_check(pushed, live_pushed, "pushed_difference_avoidance", "A'");

    // S + A inside A', one pair of levels at a time.
    const std::uint64_t per_pair = std::max<std::uint64_t>(1, (trials + L * L - 1) / (L * L));
    for (std::size_t j = 1; j <= L; ++j) {
        for (std::size_t l = 1; l <= L; ++l) {
            const std::size_t r = std::max(j, l);
            Verdict v = sampled_verdict("push_containment", per_pair);
            v.parameters["ball_level"] = j;
            v.parameters["set_level"] = l;
            v.parameters["target_level"] = r;
            v.parameters["target"] = params.pushed_set(r).format();
            RandomStream rng(detail::stream_seed(seed, stream++));
            std::uint64_t done = 0;
            if (!dense.empty(l)) {
                for (; done < per_pair; ++done) {
                    const BlockElement a = dense.draw(l, rng);
                    const BallDraw s = draw_ball_V(params.n[j - 1], params.k[j - 1], rng);
                    BlockElement x = a;
                    add_ball_draw(x, s, rng);
                    if (!pushed.in_level(x, r)) {
                        v.status = Status::refuted;
                        v.certificate = "sampled sum outside the pushed set";
                        v.witness = {{"trial", done}, {"a", a.summary()}, {"s", describe(s)}};
                        ++done;
                        break;
                    }
                }
            } else {
                v.warnings.push_back("vacuous: level set is empty");
            }
            v.budget_spent["pairs"] = done;
            if (!v.refuted()) {
                v.status = dense.empty(l) ? Status::proven : Status::inconclusive;
                v.certificate = dense.empty(l) ? "empty level set" : "no violation in " + std::to_string(done) + " sampled pairs";
            }
            rep.verdicts.push_back(v);
        }
    }

    {
        Verdict v = sampled_verdict("shift_disjointness", trials);
        RandomStream rng(detail::stream_seed(seed, stream++));
        std::uint64_t done = 0;
        if (!live.empty()) {
            for (; done < trials; ++done) {
                const std::size_t l = live[done % live.size()];
                BlockElement x = dense.draw(l, rng);
                for (std::uint64_t leaf = 0; leaf < x.leaves(); ++leaf) x.complement_leaf(leaf);
                if (dense.in_union(x)) {
                    v.status = Status::refuted;
                    v.certificate = "sampled a in A with a + 1 in A";
                    v.witness = {{"trial", done}, {"level", l}};
                    ++done;
                    break;
                }
            }
        }
        v.budget_spent["draws"] = done;
        if (!v.refuted()) {
            v.status = live.empty() ? Status::proven : Status::inconclusive;
            v.certificate = live.empty() ? "empty set" : "no violation in " + std::to_string(done) + " sampled elements";
        }
        rep.verdicts.push_back(v);
    }
    report_densities(rep, limits, check_target);
    return rep;
}

/// Single-level enumeration analog at scale 4 with the first radius: n = 4, k = k_1, m = 3 k_1.
inline WitnessReport exhaustive_analog(std::uint64_t k1, const Limits& limits = {}, unsigned threads = 1) {
    return verify_exhaustive(ConstructionParams::make(mpq_class(1, 10), {k1}, {4}), limits, threads, false);
}

} // namespace recset
