#pragma once

// Graphs and exact colorability decisions: the F2 linear system for 2-colorings
// of binary Cayley graphs, BFS bipartiteness with odd-cycle witnesses, and
// DSATUR backtracking with forward checking for k >= 3.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "recset/codes.hpp"
#include "recset/finite_set.hpp"
#include "recset/verdict.hpp"

namespace recset {

struct ExplicitGraph {
    std::vector<std::vector<std::uint32_t>> adj;

    std::uint64_t size() const { return adj.size(); }
    template <class Fn>
    void for_each_neighbor(std::uint64_t v, Fn&& fn) const {
        for (auto w : adj[v]) fn(static_cast<std::uint64_t>(w));
    }
    std::uint64_t edge_count() const {
        std::uint64_t e = 0;
        for (const auto& a : adj) e += a.size();
        return e / 2;
    }
};

/// Cayley(G_p^(n), S): g ~ h iff g - h lies in the connection set. The
/// connection is closed under negation and never contains 0.
class CayleyGraph {
public:
    explicit CayleyGraph(const FiniteSet& s) : space_(s.space()), connection_(s) {
        connection_.erase(0);
        s.for_each([&](std::uint64_t c) {
            if (c != 0) connection_.insert(space_.negate(c));
        });
        generators_ = connection_.members();
    }

    std::uint64_t size() const { return space_.size(); }
    const CodeSpace& space() const { return space_; }
    const FiniteSet& connection() const { return connection_; }
    const std::vector<std::uint64_t>& generators() const { return generators_; }
    bool adjacent(std::uint64_t a, std::uint64_t b) const { return connection_.contains(space_.subtract(a, b)); }

    template <class Fn>
    void for_each_neighbor(std::uint64_t v, Fn&& fn) const {
        for (auto s : generators_) fn(space_.add(v, s));
    }

    ExplicitGraph to_explicit() const {
        ExplicitGraph g;
        g.adj.resize(size());
        for (std::uint64_t v = 0; v < size(); ++v) {
            auto& a = g.adj[v];
            a.reserve(generators_.size());
            for (auto s : generators_) a.push_back(static_cast<std::uint32_t>(space_.add(v, s)));
            std::sort(a.begin(), a.end());
        }
        return g;
    }

private:
    CodeSpace space_;
    FiniteSet connection_;
    std::vector<std::uint64_t> generators_;
};

/// Kneser graph K(ground, r): r-subsets as bit masks in increasing numeric order, adjacent when disjoint.
struct KneserGraph {
    unsigned ground = 0;
    unsigned r = 0;
    std::vector<std::uint64_t> subsets;
    ExplicitGraph graph;

    static KneserGraph make(unsigned ground, unsigned r, std::uint64_t max_vertices) {
        if (ground > 62 || r == 0 || r > ground) throw invalid_argument("Kneser graph needs 1 <= r <= ground <= 62");
        KneserGraph k{ground, r, {}, {}};
        std::uint64_t mask = (std::uint64_t{1} << r) - 1;
        const std::uint64_t limit = std::uint64_t{1} << ground;
        while (mask < limit) {
            k.subsets.push_back(mask);
            if (k.subsets.size() > max_vertices) throw cap_exceeded("Kneser graph exceeds the vertex budget");
            // next combination with the same popcount (Gosper)
            const std::uint64_t low = mask & (~mask + 1);
            const std::uint64_t ripple = mask + low;
            mask = ripple | (((ripple ^ mask) >> 2) / low);
        }
        const std::size_t n = k.subsets.size();
        k.graph.adj.resize(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if ((k.subsets[a] & k.subsets[b]) == 0) {
                    k.graph.adj[a].push_back(static_cast<std::uint32_t>(b));
                    k.graph.adj[b].push_back(static_cast<std::uint32_t>(a));
                }
        return k;
    }

    std::string label(std::uint64_t v) const {
        std::string s = "{";
        bool first = true;
        for (unsigned e = 0; e < ground; ++e)
            if ((subsets[v] >> e) & 1u) {
                if (!first) s += ",";
                s += std::to_string(e + 1);
                first = false;
            }
        return s + "}";
    }
};

/// Greedy clique: repeatedly take the candidate with most neighbours among the
/// remaining candidates, lowest index on ties.
inline std::vector<std::uint64_t> greedy_clique(const ExplicitGraph& g) {
    const std::size_t n = g.adj.size();
    if (n == 0) return {};
    const std::size_t words = (n + 63) / 64;
    std::vector<std::uint64_t> rows(n * words, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (auto w : g.adj[v]) rows[v * words + w / 64] |= std::uint64_t{1} << (w % 64);
    std::vector<std::uint64_t> cand(words, 0);
    for (std::size_t v = 0; v < n; ++v) cand[v / 64] |= std::uint64_t{1} << (v % 64);
    std::vector<std::uint64_t> clique;
    while (true) {
        std::int64_t best = -1;
        std::uint64_t best_score = 0;
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t word = cand[w];
            while (word) {
                const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
                word &= word - 1;
                std::uint64_t score = 0;
                for (std::size_t x = 0; x < words; ++x) score += static_cast<std::uint64_t>(std::popcount(rows[v * words + x] & cand[x]));
                if (best < 0 || score > best_score) {
                    best = static_cast<std::int64_t>(v);
                    best_score = score;
                }
            }
        }
        if (best < 0) break;
        clique.push_back(static_cast<std::uint64_t>(best));
        for (std::size_t x = 0; x < words; ++x) cand[x] &= rows[static_cast<std::size_t>(best) * words + x];
    }
    std::sort(clique.begin(), clique.end());
    return clique;
}

/// Greedy clique through 0 in a Cayley graph, scanning generators in code order.
inline std::vector<std::uint64_t> greedy_clique(const CayleyGraph& g) {
    if (g.size() <= 2048) return greedy_clique(g.to_explicit());
    std::vector<std::uint64_t> clique{0};
    for (auto s : g.generators()) {
        bool ok = true;
        for (std::size_t i = 1; i < clique.size() && ok; ++i) ok = g.adjacent(s, clique[i]);
        if (ok) clique.push_back(s);
    }
    return clique;
}

struct ColoringSearch {
    enum class Outcome { colored, impossible, budget };
    Outcome outcome = Outcome::impossible;
    std::vector<int> coloring;
    std::uint64_t nodes = 0;
};

/// Exact k-colorability by DSATUR backtracking. Vertex choice: largest
/// saturation, lowest index on ties. A new colour is opened only as the next
/// unused one. `fixed` vertices (a clique) are precoloured 0, 1, ...
inline ColoringSearch dsatur_search(const ExplicitGraph& g, unsigned k, std::uint64_t node_budget,
                                    const std::vector<std::uint64_t>& fixed = {}) {
    ColoringSearch result;
    const std::size_t n = g.adj.size();
    if (n == 0) {
        result.outcome = ColoringSearch::Outcome::colored;
        return result;
    }
    if (k == 0) return result;
    if (fixed.size() > k) return result;

    std::vector<int> color(n, -1);
    std::vector<std::uint32_t> cnt(n * k, 0);
    std::vector<unsigned> sat(n, 0);
    std::size_t colored = 0;
    bool wiped = false;

    auto assign = [&](std::size_t v, unsigned c) {
        color[v] = static_cast<int>(c);
        ++colored;
        for (auto w : g.adj[v]) {
            if (color[w] >= 0) continue;
            if (cnt[w * k + c]++ == 0 && ++sat[w] == k) wiped = true;
        }
    };
    auto unassign = [&](std::size_t v) {
        const auto c = static_cast<unsigned>(color[v]);
        color[v] = -1;
        --colored;
        for (auto w : g.adj[v]) {
            if (color[w] >= 0) continue;
            if (--cnt[w * k + c] == 0) --sat[w];
        }
    };
    auto select = [&]() -> std::int64_t {
        std::int64_t best = -1;
        unsigned best_sat = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (color[v] >= 0) continue;
            if (best < 0 || sat[v] > best_sat) {
                best = static_cast<std::int64_t>(v);
                best_sat = sat[v];
            }
        }
        return best;
    };

    int max_used = -1;
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (cnt[fixed[i] * k + i] != 0) return result;
        assign(fixed[i], static_cast<unsigned>(i));
        max_used = static_cast<int>(i);
    }
    if (wiped) return result;

    struct Frame {
        std::size_t v;
        unsigned next;
        int prev_max;
        bool placed;
    };
    std::vector<Frame> stack;
    bool descend = true;
    while (true) {
        if (descend) {
            const auto v = select();
            if (v < 0) {
                result.outcome = ColoringSearch::Outcome::colored;
                result.coloring = color;
                return result;
            }
            stack.push_back({static_cast<std::size_t>(v), 0, max_used, false});
        }
        Frame& f = stack.back();
        if (f.placed) {
            unassign(f.v);
            wiped = false;
            f.placed = false;
            max_used = f.prev_max;
        }
        const unsigned limit = static_cast<unsigned>(std::min<int>(static_cast<int>(k) - 1, f.prev_max + 1));
        unsigned c = f.next;
        while (c <= limit && cnt[f.v * k + c] != 0) ++c;
        if (c > limit) {
            stack.pop_back();
            if (stack.empty()) {
                result.outcome = ColoringSearch::Outcome::impossible;
                return result;
            }
            descend = false;
            continue;
        }
        f.next = c + 1;
        f.placed = true;
        wiped = false;
        assign(f.v, c);
        max_used = std::max(f.prev_max, static_cast<int>(c));
        if (++result.nodes >= node_budget) {
            result.outcome = ColoringSearch::Outcome::budget;
            return result;
        }
        descend = !wiped;
    }
}

/// Odd cycle through a BFS conflict edge (u, v).
template <class Graph>
std::vector<std::uint64_t> odd_cycle(const std::vector<std::int64_t>& parent, std::uint64_t u, std::uint64_t v) {
    std::vector<std::uint64_t> pu{u}, pv{v};
    auto depth = [&](std::uint64_t x) {
        std::size_t d = 0;
        while (parent[x] >= 0) {
            x = static_cast<std::uint64_t>(parent[x]);
            ++d;
        }
        return d;
    };
    std::size_t du = depth(u), dv = depth(v);
    while (du > dv) {
        pu.push_back(static_cast<std::uint64_t>(parent[pu.back()]));
        --du;
    }
    while (dv > du) {
        pv.push_back(static_cast<std::uint64_t>(parent[pv.back()]));
        --dv;
    }
    while (pu.back() != pv.back()) {
        pu.push_back(static_cast<std::uint64_t>(parent[pu.back()]));
        pv.push_back(static_cast<std::uint64_t>(parent[pv.back()]));
    }
    pv.pop_back();
    std::reverse(pv.begin(), pv.end());
    pu.insert(pu.end(), pv.begin(), pv.end());
    return pu;
}

struct Bipartition {
    bool bipartite = true;
    std::vector<int> side;             // valid when bipartite
    std::vector<std::uint64_t> cycle;  // odd cycle otherwise
    std::uint64_t visited = 0;
};

template <class Graph>
Bipartition bfs_bipartition(const Graph& g) {
    Bipartition b;
    const std::uint64_t n = g.size();
    b.side.assign(n, -1);
    std::vector<std::int64_t> parent(n, -1);
    std::queue<std::uint64_t> q;
    for (std::uint64_t root = 0; root < n; ++root) {
        if (b.side[root] >= 0) continue;
        b.side[root] = 0;
        q.push(root);
        while (!q.empty()) {
            const auto u = q.front();
            q.pop();
            ++b.visited;
            bool conflict = false;
            std::uint64_t other = 0;
            g.for_each_neighbor(u, [&](std::uint64_t w) {
                if (conflict) return;
                if (b.side[w] < 0) {
                    b.side[w] = 1 - b.side[u];
                    parent[w] = static_cast<std::int64_t>(u);
                    q.push(w);
                } else if (b.side[w] == b.side[u]) {
                    conflict = true;
                    other = w;
                }
            });
            if (conflict) {
                b.bipartite = false;
                b.cycle = odd_cycle<Graph>(parent, u, other);
                b.side.clear();
                return b;
            }
        }
    }
    return b;
}

/// 2-colorability of a binary Cayley graph: solvable iff some linear functional
/// phi has phi(s) = 1 on every generator. Works on code bits, n <= 5.
struct F2Decision {
    bool solvable = false;
    std::uint64_t functional = 0;              // code-bit mask when solvable
    std::vector<std::uint64_t> odd_relation;   // odd set of generators summing to 0 otherwise
    std::uint64_t rows = 0;
};

inline F2Decision f2_two_coloring(const std::vector<std::uint64_t>& gens, unsigned length) {
    if (length > 32) throw cap_exceeded("F2 system supports at most 32 coordinates (n <= 5)");
    F2Decision d;
    struct Row {
        std::uint64_t bits = 0;
        std::uint64_t slots = 0;
        bool used = false;
    };
    std::vector<Row> basis(length);
    std::vector<std::size_t> slot_gen;
    const std::uint64_t one = std::uint64_t{1} << length;
    const std::uint64_t vec_mask = one - 1;
    for (std::size_t r = 0; r < gens.size(); ++r) {
        ++d.rows;
        std::uint64_t x = gens[r] | one;
        std::uint64_t slots = 0;
        for (int bit = static_cast<int>(length) - 1; bit >= 0; --bit) {
            if (!((x >> bit) & 1u)) continue;
            if (basis[static_cast<std::size_t>(bit)].used) {
                x ^= basis[static_cast<std::size_t>(bit)].bits;
                slots ^= basis[static_cast<std::size_t>(bit)].slots;
            } else {
                const std::size_t s = slot_gen.size();
                slot_gen.push_back(r);
                basis[static_cast<std::size_t>(bit)] = {x, slots | (std::uint64_t{1} << s), true};
                x = 0;
                break;
            }
        }
        if ((x & vec_mask) == 0 && (x & one)) {
            d.solvable = false;
            d.odd_relation.push_back(gens[r]);
            for (std::size_t s = 0; s < slot_gen.size(); ++s)
                if ((slots >> s) & 1u) d.odd_relation.push_back(gens[slot_gen[s]]);
            std::sort(d.odd_relation.begin(), d.odd_relation.end());
            return d;
        }
    }
    d.solvable = true;
    std::uint64_t phi = 0;
    for (unsigned bit = 0; bit < length; ++bit) {
        const Row& row = basis[bit];
        if (!row.used) continue;
        const std::uint64_t rest = row.bits & vec_mask & ~(std::uint64_t{1} << bit);
        const std::uint64_t value = ((row.bits >> length) & 1u) ^ (static_cast<std::uint64_t>(std::popcount(rest & phi)) & 1u);
        if (value) phi |= std::uint64_t{1} << bit;
    }
    d.functional = phi;
    return d;
}

namespace detail {

inline json encode_codes(const CodeSpace& cs, const std::vector<std::uint64_t>& codes) {
    json a = json::array();
    for (auto c : codes) a.push_back(cs.element(c).encode());
    return a;
}

inline constexpr std::uint64_t witness_listing_cap = 4096;
inline constexpr std::uint64_t explicit_edge_cap = 60'000'000;

} // namespace detail

/// Decide chi(graph) > k on an explicit graph, labelling vertices with `label`.
template <class Label>
Verdict color_explicit(const ExplicitGraph& g, unsigned k, const Budget& budget, Label&& label,
                       std::vector<std::uint64_t> clique = {}) {
    Verdict v;
    v.mode = Mode::search;
    v.parameters = {{"vertices", g.size()}, {"edges", g.edge_count()}, {"colors", k}};
    if (k >= g.size()) {
        v.status = Status::refuted;
        v.certificate = "rainbow coloring";
        json col = json::array();
        for (std::uint64_t x = 0; x < g.size(); ++x) col.push_back(x);
        v.witness = {{"coloring", col}};
        return v;
    }
    if (clique.empty()) clique = greedy_clique(g);
    v.budget_spent["clique_size"] = clique.size();
    if (clique.size() > k) {
        v.status = Status::proven;
        v.certificate = "clique of size " + std::to_string(clique.size()) + " exceeds " + std::to_string(k) + " colors";
        json c = json::array();
        for (auto x : clique) c.push_back(label(x));
        v.witness = {{"clique", c}};
        return v;
    }
    const auto search = dsatur_search(g, k, budget.nodes, clique);
    v.budget_spent["nodes"] = search.nodes;
    switch (search.outcome) {
        case ColoringSearch::Outcome::impossible:
            v.status = Status::proven;
            v.certificate = "exhaustive DSATUR search with a precoloured clique of size " + std::to_string(clique.size()) +
                            " found no proper " + std::to_string(k) + "-coloring";
            break;
        case ColoringSearch::Outcome::colored: {
            v.status = Status::refuted;
            v.certificate = "proper coloring found by DSATUR search";
            json col = json::array();
            for (auto c : search.coloring) col.push_back(c);
            v.witness = {{"coloring", col}};
            break;
        }
        case ColoringSearch::Outcome::budget:
            v.status = Status::inconclusive;
            v.budget_exhausted = true;
            v.warnings.push_back("node budget of " + std::to_string(budget.nodes) + " exhausted");
            break;
    }
    return v;
}

/// chi(Cayley(S)) > k. PROVEN carries an obstruction (odd relation, odd cycle,
/// clique or exhausted search); REFUTED carries a proper k-coloring.
inline Verdict chromatic_exceeds(const CayleyGraph& graph, unsigned k, const Budget& budget = {}) {
    const CodeSpace& cs = graph.space();
    Verdict v;
    v.check = "chromatic_exceeds";
    v.mode = Mode::search;
    v.parameters = {{"p", cs.p()}, {"n", cs.n()}, {"colors", k}, {"vertices", graph.size()},
                    {"connection_size", graph.generators().size()}};
    if (k == 0) throw invalid_argument("need at least one color");
    if (graph.generators().empty()) {
        v.status = Status::refuted;
        v.certificate = "empty connection set: one class suffices";
        v.witness = {{"coloring_rule", "every vertex gets color 0"}};
        return v;
    }
    if (k >= graph.size()) {
        v.status = Status::refuted;
        v.certificate = "rainbow coloring";
        v.witness = {{"coloring_rule", "vertex with code c gets color c"}};
        return v;
    }
    if (k == 1) {
        v.status = Status::proven;
        const auto s = graph.generators().front();
        v.certificate = "a single class contains the adjacent pair (0, s)";
        v.witness = {{"pair", detail::encode_codes(cs, {0, s})}, {"difference", cs.element(s).encode()}};
        return v;
    }
    if (k == 2 && cs.p() == 2 && cs.length() <= 32) {
        const auto d = f2_two_coloring(graph.generators(), static_cast<unsigned>(cs.length()));
        v.budget_spent["rows"] = d.rows;
        v.certificate = "F2 linear system phi(s) = 1 over all generators";
        if (d.solvable) {
            v.status = Status::refuted;
            GroupElement phi(2, cs.n());
            for (std::uint64_t j = 0; j < cs.length(); ++j)
                if ((d.functional >> (cs.length() - 1 - j)) & 1u) phi.set(j, 1);
            v.witness = {{"functional", phi.encode()},
                         {"coloring_rule", "color(g) = sum of g over the cylinders where the functional is 1, mod 2"}};
        } else {
            v.status = Status::proven;
            v.witness = {{"odd_relation", detail::encode_codes(cs, d.odd_relation)},
                         {"relation_size", d.odd_relation.size()},
                         {"meaning", "an odd number of generators summing to 0, so every 2-coloring has a monochromatic edge"}};
        }
        return v;
    }
    if (k == 2) {
        const auto b = bfs_bipartition(graph);
        v.budget_spent["visited"] = b.visited;
        v.certificate = "breadth-first bipartiteness test";
        if (b.bipartite) {
            v.status = Status::refuted;
            if (graph.size() <= detail::witness_listing_cap) v.witness = {{"coloring", b.side}};
            else v.witness = {{"coloring_rule", "breadth-first parity from the lowest unvisited code"}};
        } else {
            v.status = Status::proven;
            v.witness = {{"odd_cycle", detail::encode_codes(cs, b.cycle)}, {"length", b.cycle.size()}};
        }
        return v;
    }
    const auto clique = greedy_clique(graph);
    if (clique.size() > k) {
        v.status = Status::proven;
        v.budget_spent["clique_size"] = clique.size();
        v.certificate = "clique of size " + std::to_string(clique.size()) + " exceeds " + std::to_string(k) + " colors";
        v.witness = {{"clique", detail::encode_codes(cs, std::vector<std::uint64_t>(clique.begin(), clique.begin() + static_cast<std::ptrdiff_t>(k + 1)))}};
        return v;
    }
    if (graph.size() * graph.generators().size() > detail::explicit_edge_cap) {
        v.status = Status::inconclusive;
        v.budget_exhausted = true;
        v.warnings.push_back("graph too large for coloring search");
        return v;
    }
    const auto g = graph.to_explicit();
    auto inner = color_explicit(g, k, budget, [&](std::uint64_t x) { return cs.element(x).encode(); }, clique);
    inner.check = v.check;
    inner.parameters = v.parameters;
    if (inner.refuted() && graph.size() > detail::witness_listing_cap) inner.witness = {{"coloring_rule", "omitted: graph too large to list"}};
    return inner;
}

} // namespace recset
