#pragma once

// Probes of translated balls over odd p: for each translate g, is the Cayley
// graph on (g + V(n,k)) ∪ -(g + V(n,k)) \ {0} still not colorable with the given
// number of colors? Results are evidence tables, not answers.

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "recset/coloring.hpp"
#include "recset/finite_set.hpp"
#include "recset/niveau.hpp"
#include "recset/random.hpp"
#include "recset/verdict.hpp"

namespace recset {

struct ProbeOptions {
    std::uint32_t p = 3;
    unsigned n = 1;
    std::uint64_t k = 1;
    unsigned colors = 2;
    /// Unset: every translate. Set: this many distinct random translates.
    std::optional<std::uint64_t> sample;
    std::uint64_t seed = 0;
    Budget budget;
    bool allow_even = false;
    bool timings = false;
    /// Translates drawn when the group is too large to list.
    std::uint64_t fallback_sample = 20;
};

struct ProbeResult {
    GroupElement translate;
    Verdict verdict;
    double seconds = 0;
};

struct ProbeReport {
    ProbeOptions options;
    std::vector<ProbeResult> rows;
    std::vector<std::string> warnings;

    std::uint64_t count(Status s) const {
        std::uint64_t c = 0;
        for (const auto& r : rows) c += r.verdict.status == s;
        return c;
    }

    std::vector<Verdict> verdicts() const {
        std::vector<Verdict> out;
        for (const auto& r : rows) out.push_back(r.verdict);
        return out;
    }

    static std::string csv_header(bool timings) {
        return std::string("p,n,k,colors,translate,status,mode,nodes") + (timings ? ",seconds" : "");
    }

    std::string csv() const {
        std::ostringstream out;
        out << csv_header(options.timings) << '\n';
        for (const auto& r : rows) {
            const auto nodes = r.verdict.budget_spent.count("nodes") ? r.verdict.budget_spent.at("nodes") : 0;
            out << options.p << ',' << options.n << ',' << options.k << ',' << options.colors << ',' << r.translate.encode()
                << ',' << to_string(r.verdict.status) << ',' << to_string(r.verdict.mode) << ',' << nodes;
            if (options.timings) out << ',' << r.seconds;
            out << '\n';
        }
        return out.str();
    }

    json to_json() const {
        json rows_j = json::array();
        for (const auto& r : rows) {
            json row = {{"translate", r.translate.encode()}, {"verdict", r.verdict.to_json()}};
            if (options.timings) row["seconds"] = r.seconds;
            rows_j.push_back(row);
        }
        return {{"p", options.p},
                {"n", options.n},
                {"k", options.k},
                {"colors", options.colors},
                {"translates", options.sample ? json("sample") : json("all")},
                {"seed", options.seed},
                {"rng", RandomStream::algorithm},
                {"counts",
                 {{"PROVEN", count(Status::proven)},
                  {"REFUTED", count(Status::refuted)},
                  {"INCONCLUSIVE", count(Status::inconclusive)}}},
                {"scope", "each row tests one translated ball V(n,k), not a union over scales; a proper coloring is "
                          "evidence about that ball only"},
                {"warnings", warnings},
                {"rows", rows_j}};
    }
};

/// The connection set g + V(n, k), before symmetrization.
inline FiniteSet translated_ball(std::uint32_t p, unsigned n, std::uint64_t k, const GroupElement& g, const Limits& limits = {}) {
    const FiniteSet v = materialize(HammingBallSpec::V(p, n, k), limits);
    return v.translate(g);
}

/// Symmetric closure S ∪ -S.
inline FiniteSet symmetrize(const FiniteSet& s) {
    FiniteSet out = s;
    s.for_each([&](std::uint64_t c) { out.insert(s.space().negate(c)); });
    return out;
}

inline ProbeReport probe_odd_prime(const ProbeOptions& opt, const Limits& limits = {}) {
    require_prime(opt.p);
    if (opt.p == 2 && !opt.allow_even) throw invalid_argument("the probe targets odd primes (pass allow_even for p = 2)");
    if (opt.colors == 0) throw invalid_argument("colors must be at least 1");
    ProbeReport rep;
    rep.options = opt;
    const CodeSpace space(opt.p, opt.n, limits);
    const FiniteSet ball = materialize(HammingBallSpec::V(opt.p, opt.n, opt.k), limits);

    std::vector<std::uint64_t> translates;
    std::optional<std::uint64_t> sample = opt.sample;
    if (!sample && space.size() > limits.enumeration_cap / 64) {
        sample = opt.fallback_sample;
        rep.warnings.push_back("too many translates to list; sampling " + std::to_string(*sample));
        rep.options.sample = sample;
    }
    if (sample) {
        RandomStream rng(opt.seed);
        std::set<std::uint64_t> seen;
        const std::uint64_t want = std::min<std::uint64_t>(*sample, space.size());
        while (translates.size() < want) {
            const std::uint64_t c = rng.below(space.size());
            if (seen.insert(c).second) translates.push_back(c);
        }
    } else {
        for (std::uint64_t c = 0; c < space.size(); ++c) translates.push_back(c);
    }

    for (auto c : translates) {
        const auto start = std::chrono::steady_clock::now();
        const GroupElement g = space.element(c);
        Verdict v = chromatic_exceeds(CayleyGraph(ball.translate(c)), opt.colors, opt.budget);
        v.check = "translated_ball_coloring";
        v.parameters["ball"] = HammingBallSpec::V(opt.p, opt.n, opt.k).format();
        v.parameters["translate"] = g.encode();
        if (v.refuted()) v.warnings.push_back("a proper coloring of one translated ball is evidence, not a resolution");
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rep.rows.push_back({g, std::move(v), secs});
    }
    return rep;
}

} // namespace recset
