#pragma once

// Difference-set avoidance and chromatic recurrence checks.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "recset/coloring.hpp"
#include "recset/counting.hpp"
#include "recset/finite_set.hpp"
#include "recset/niveau.hpp"
#include "recset/random.hpp"
#include "recset/verdict.hpp"

namespace recset {

/// (A - A) and S are disjoint, checked over all |A|^2 ordered pairs. A
/// violation reports the first pair (a, a') in code order. Work is split over
/// `threads` contiguous ranges of a and merged in index order.
inline Verdict difference_avoids(const FiniteSet& a_set, const SetPredicate& s, unsigned threads = 1) {
    const CodeSpace& cs = a_set.space();
    if (s.p != cs.p() || s.n != cs.n()) throw invalid_argument("difference check needs A and S in the same group");
    Verdict v;
    v.check = "difference_avoids";
    v.mode = Mode::exhaustive;
    v.parameters = {{"p", cs.p()}, {"n", cs.n()}, {"A_size", a_set.cardinality()}, {"S", s.description}};

    const FiniteSet s_set = materialize(s);
    const auto members = a_set.members();
    const std::size_t m = members.size();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(m, 1))));

    struct Hit {
        std::size_t i = 0, j = 0;
        bool found = false;
    };
    std::vector<Hit> hits(threads);
    auto work = [&](unsigned t) {
        const std::size_t lo = m * t / threads, hi = m * (t + 1) / threads;
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (s_set.contains(cs.subtract(members[i], members[j]))) {
                    hits[t] = {i, j, true};
                    return;
                }
    };
    if (threads == 1) work(0);
    else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    v.budget_spent["pairs"] = static_cast<std::uint64_t>(m) * m;
    for (const auto& h : hits) {
        if (!h.found) continue;
        const auto a = members[h.i], b = members[h.j];
        v.status = Status::refuted;
        v.certificate = "explicit pair with difference in S";
        v.witness = {{"a", cs.element(a).encode()}, {"a_prime", cs.element(b).encode()},
                     {"difference", cs.element(cs.subtract(a, b)).encode()}};
        return v;
    }
    v.status = Status::proven;
    v.certificate = "enumerated all " + std::to_string(static_cast<std::uint64_t>(m) * m) + " ordered pairs of A at scale " +
                    std::to_string(cs.n());
    return v;
}

/// Random pairs from A (rejection sampling into A) tested for a - a' in S.
/// Never proves anything: no hit gives INCONCLUSIVE with the trial count.
inline Verdict sampled_difference_check(const SetPredicate& a, const SetPredicate& s, std::uint64_t trials,
                                        RandomStream& rng, std::uint64_t burn_in = 100000) {
    if (a.p != s.p || a.n != s.n) throw invalid_argument("sampled check needs A and S at a common scale");
    if (trials == 0) throw invalid_argument("trials must be at least 1");
    Verdict v;
    v.check = "sampled_difference_check";
    v.mode = Mode::sampled;
    v.parameters = {{"p", a.p}, {"n", a.n}, {"A", a.description}, {"S", s.description}, {"trials", trials},
                    {"seed", rng.seed()}, {"rng", RandomStream::algorithm}};
    std::uint64_t draws = 0, hits_in_a = 0;
    auto draw_member = [&]() -> std::optional<GroupElement> {
        while (true) {
            auto g = random_element(a.p, a.n, rng);
            ++draws;
            if (a(g)) {
                ++hits_in_a;
                return g;
            }
            if (hits_in_a == 0 && draws >= burn_in) return std::nullopt;
        }
    };
    std::uint64_t done = 0;
    for (; done < trials; ++done) {
        auto x = draw_member();
        auto y = x ? draw_member() : std::nullopt;
        if (!x || !y) {
            v.status = Status::inconclusive;
            v.budget_exhausted = true;
            v.warnings.push_back("rejection sampling found no member of A in " + std::to_string(burn_in) + " burn-in draws");
            break;
        }
        const GroupElement d = *x - *y;
        if (s(d)) {
            v.status = Status::refuted;
            v.certificate = "sampled pair with difference in S";
            v.witness = {{"a", x->encode()}, {"a_prime", y->encode()}, {"difference", d.encode()}, {"trial", done}};
            ++done;
            break;
        }
    }
    v.budget_spent["pairs"] = done;
    v.budget_spent["draws"] = draws;
    if (v.status == Status::inconclusive && !v.budget_exhausted)
        v.certificate = "no violation in " + std::to_string(done) + " sampled pairs";
    return v;
}

/// chi(Cayley(U(n, 2k+2) \ {0})) > k: every k-partition of G_p^(n) has a class
/// with a nonzero difference in the ball.
inline Verdict verify_poincare(std::uint32_t p, unsigned n, unsigned k, const Budget& budget = {}, bool relax = false,
                               const Limits& limits = {}) {
    if (k == 0) throw invalid_argument("k must be at least 1");
    if (!relax && k >= n) throw invalid_argument("the ball lemma needs k < n (use the relax flag to override)");
    const std::uint64_t radius = std::min<std::uint64_t>(2ull * k + 2, std::uint64_t{1} << n);
    const FiniteSet ball = materialize(HammingBallSpec::U(p, n, radius), limits);
    Verdict v = chromatic_exceeds(CayleyGraph(ball), k, budget);
    v.check = "poincare_ball";
    v.parameters["k"] = k;
    v.parameters["radius"] = radius;
    return v;
}

/// chi(Cayley((g + U(n, 3k+3)) \ {0})) > k for p = 2.
inline Verdict verify_translate_claim(unsigned n, unsigned k, const GroupElement& g, const Budget& budget = {},
                                      const Limits& limits = {}) {
    if (g.p() != 2) throw invalid_argument("the translate check is stated for p = 2");
    if (g.n() > n) throw invalid_argument("translate scale exceeds n");
    if (k == 0) throw invalid_argument("k must be at least 1");
    const std::uint64_t radius = 3ull * k + 3;
    Verdict v;
    if (radius > (std::uint64_t{1} << n)) {
        // The translated ball is the whole group.
        v = chromatic_exceeds(CayleyGraph(materialize(HammingBallSpec::U(2, n, std::uint64_t{1} << n), limits)), k, budget);
        v.warnings.push_back("radius exceeds 2^n; the translated ball is all of G_2^(n)");
    } else {
        v = chromatic_exceeds(CayleyGraph(materialize(HammingBallSpec(2, n, radius, g), limits)), k, budget);
    }
    v.check = "translate_claim";
    v.parameters["k"] = k;
    v.parameters["radius"] = radius;
    v.parameters["translate"] = embed(g, n).encode();
    return v;
}

inline Verdict verify_lovasz(unsigned r, unsigned k, const Budget& budget = {}, std::uint64_t vertex_cap = 5000) {
    if (r == 0 || k == 0) throw invalid_argument("r and k must be positive");
    const auto kg = KneserGraph::make(2 * r + k, r, vertex_cap);
    Verdict v = color_explicit(kg.graph, k, budget, [&](std::uint64_t x) { return kg.label(x); });
    v.check = "kneser_coloring";
    v.parameters["r"] = r;
    v.parameters["k"] = k;
    v.parameters["ground"] = 2 * r + k;
    if (v.refuted()) v.warnings.push_back("a proper coloring would contradict the Kneser chromatic number; check the solver");
    return v;
}

struct AvoidingDensity {
    mpq_class lower;
    mpq_class upper;
    std::uint64_t best_size = 0;
    std::string lower_method;
    std::string upper_method;
    std::vector<std::uint64_t> best_set;
};

namespace detail {

/// Maximum clique on at most 256 vertices (bitset branch and bound with a greedy colouring bound).
class SmallMaxClique {
public:
    using Bits = std::array<std::uint64_t, 4>;

    explicit SmallMaxClique(std::vector<Bits> adj) : adj_(std::move(adj)) {}

    std::vector<std::uint64_t> solve(std::uint64_t node_budget, bool& finished) {
        Bits all{};
        for (std::size_t v = 0; v < adj_.size(); ++v) all[v / 64] |= std::uint64_t{1} << (v % 64);
        budget_ = node_budget;
        expand(all);
        finished = nodes_ < budget_;
        return best_;
    }
    std::uint64_t nodes() const { return nodes_; }

private:
    static bool any(const Bits& b) { return b[0] | b[1] | b[2] | b[3]; }

    void expand(Bits cand) {
        if (++nodes_ >= budget_) return;
        // Greedy colouring of the candidates gives an upper bound per vertex.
        std::vector<std::pair<std::size_t, std::size_t>> order;  // (vertex, colour)
        Bits uncoloured = cand;
        std::size_t colour = 0;
        while (any(uncoloured)) {
            ++colour;
            Bits q = uncoloured;
            while (any(q)) {
                std::size_t w = 0;
                while (!q[w]) ++w;
                const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(q[w]));
                q[v / 64] &= ~(std::uint64_t{1} << (v % 64));
                uncoloured[v / 64] &= ~(std::uint64_t{1} << (v % 64));
                for (int x = 0; x < 4; ++x) q[x] &= ~adj_[v][x];
                order.emplace_back(v, colour);
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            if (current_.size() + it->second <= best_.size()) return;
            const std::size_t v = it->first;
            current_.push_back(v);
            Bits next;
            for (int x = 0; x < 4; ++x) next[x] = cand[x] & adj_[v][x];
            if (!any(next)) {
                if (current_.size() > best_.size()) best_.assign(current_.begin(), current_.end());
            } else {
                expand(next);
            }
            current_.pop_back();
            cand[v / 64] &= ~(std::uint64_t{1} << (v % 64));
            if (nodes_ >= budget_) return;
        }
    }

    std::vector<Bits> adj_;
    std::vector<std::uint64_t> current_, best_;
    std::uint64_t nodes_ = 0, budget_ = 0;
};

} // namespace detail

/// Bounds on the largest density of A with (A - A) and S disjoint, i.e. the
/// independence ratio of Cayley(S). Lower: greedy independent set extended
/// from `seed` (for S = V(n,m) pass A_1(n,m)). Upper: exact search up to 256
/// vertices, else alpha * omega <= |G| for the vertex-transitive Cayley graph.
inline AvoidingDensity max_avoiding_density(const FiniteSet& s, const Budget& budget = {},
                                            const std::optional<FiniteSet>& seed = std::nullopt) {
    const CayleyGraph graph(s);
    const CodeSpace& cs = graph.space();
    const std::uint64_t n = graph.size();
    AvoidingDensity out;

    std::vector<std::uint64_t> chosen;
    FiniteSet blocked(cs.p(), cs.n());
    auto take = [&](std::uint64_t v) {
        chosen.push_back(v);
        blocked.insert(v);
        graph.for_each_neighbor(v, [&](std::uint64_t w) { blocked.insert(w); });
    };
    if (seed) {
        if (seed->p() != cs.p() || seed->n() != cs.n()) throw invalid_argument("seed set lives in another group");
        seed->for_each([&](std::uint64_t v) {
            if (!blocked.contains(v)) take(v);
        });
    }
    for (std::uint64_t v = 0; v < n; ++v)
        if (!blocked.contains(v)) take(v);
    std::sort(chosen.begin(), chosen.end());
    out.best_size = chosen.size();
    out.lower_method = seed ? "seeded greedy independent set" : "greedy independent set";

    if (n <= 256) {
        std::vector<detail::SmallMaxClique::Bits> comp(n, detail::SmallMaxClique::Bits{});
        for (std::uint64_t a = 0; a < n; ++a)
            for (std::uint64_t b = 0; b < n; ++b)
                if (a != b && !graph.adjacent(a, b)) comp[a][b / 64] |= std::uint64_t{1} << (b % 64);
        detail::SmallMaxClique solver(std::move(comp));
        bool finished = false;
        auto best = solver.solve(budget.nodes, finished);
        if (best.size() > chosen.size()) {
            chosen.assign(best.begin(), best.end());
            std::sort(chosen.begin(), chosen.end());
            out.best_size = chosen.size();
            out.lower_method = "exact independent set search";
        }
        if (finished) {
            out.upper = mpq_class(static_cast<unsigned long>(best.size()), static_cast<unsigned long>(n));
            out.upper_method = "exact independent set search";
        } else {
            out.upper = 1;
            out.upper_method = "trivial (search budget exhausted)";
        }
    } else {
        const auto clique = greedy_clique(graph);
        out.upper = mpq_class(1, static_cast<unsigned long>(clique.size()));
        out.upper_method = "clique of size " + std::to_string(clique.size()) + " in a vertex-transitive graph";
    }
    out.lower = mpq_class(static_cast<unsigned long>(out.best_size), static_cast<unsigned long>(n));
    out.lower.canonicalize();
    out.upper.canonicalize();
    out.best_set = std::move(chosen);
    return out;
}

} // namespace recset
