#include <catch_amalgamated.hpp>

#include "recset/explorer.hpp"
#include "recset/recurrence.hpp"

using namespace recset;

TEST_CASE("saturated ball gives the complete graph", "[explorer]") {
    // V(1,2) over p = 3 is all of G_3^(1): every translate connects everything
    for (unsigned colors = 1; colors < 9; ++colors) {
        ProbeOptions opt;
        opt.p = 3;
        opt.n = 1;
        opt.k = 2;
        opt.colors = colors;
        const auto rep = probe_odd_prime(opt);
        CHECK(rep.rows.size() == 9);
        CHECK(rep.count(Status::proven) == 9);
    }
}

TEST_CASE("full table at p = 3, n = 2", "[explorer]") {
    ProbeOptions opt;
    opt.p = 3;
    opt.n = 2;
    opt.k = 1;
    opt.colors = 2;
    opt.seed = 7;
    const auto rep = probe_odd_prime(opt);
    REQUIRE(rep.rows.size() == 81);
    CHECK(rep.count(Status::inconclusive) == 0);
    for (const auto& r : rep.rows) {
        CHECK(r.verdict.check == "translated_ball_coloring");
        CHECK((r.verdict.proven() || r.verdict.refuted()));
        CHECK_FALSE(r.verdict.witness.is_null());
    }
    const auto again = probe_odd_prime(opt);
    CHECK(rep.csv() == again.csv());
    CHECK(rep.to_json().dump() == again.to_json().dump());

    const auto csv = rep.csv();
    CHECK(csv.rfind(ProbeReport::csv_header(false) + "\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 82);
}

TEST_CASE("sampled translates are reproducible", "[explorer]") {
    ProbeOptions opt;
    opt.p = 5;
    opt.n = 2;
    opt.k = 1;
    opt.colors = 3;
    opt.sample = 20;
    opt.seed = 7;
    opt.budget.nodes = 20000;
    const auto a = probe_odd_prime(opt);
    const auto b = probe_odd_prime(opt);
    CHECK(a.rows.size() == 20);
    CHECK(a.csv() == b.csv());
    std::set<std::string> distinct;
    for (const auto& r : a.rows) distinct.insert(r.translate.encode());
    CHECK(distinct.size() == 20);
    opt.seed = 8;
    CHECK(probe_odd_prime(opt).csv() != a.csv());
}

TEST_CASE("large groups fall back to sampling", "[explorer]") {
    ProbeOptions opt;
    opt.p = 5;
    opt.n = 2;
    opt.k = 1;
    opt.colors = 2;
    Limits limits;
    limits.enumeration_cap = 5000;
    const auto rep = probe_odd_prime(opt, limits);
    CHECK(rep.rows.size() == opt.fallback_sample);
    CHECK_FALSE(rep.warnings.empty());
    CHECK(rep.to_json()["translates"] == "sample");
}

TEST_CASE("binary probes agree with the translate claim", "[explorer][property]") {
    // the claim colours g + U(n, 3k+3); the probe colours g' + V(n, k') with V = 1 + U
    for (unsigned k : {1u, 2u}) {
        const unsigned n = 4;
        RandomStream rng(k);
        std::vector<GroupElement> translates = {make_zero(2, n), make_ones(2, n)};
        for (int t = 0; t < 3; ++t) translates.push_back(random_element(2, n, rng));
        for (const auto& g : translates) {
            const auto claim = verify_translate_claim(n, k, g);
            const auto shifted = g + make_ones(2, n);
            const FiniteSet conn = translated_ball(2, n, 3 * k + 3, shifted);
            const auto probe = chromatic_exceeds(CayleyGraph(conn), k);
            CHECK(claim.status == probe.status);
        }
    }
    ProbeOptions opt;
    opt.p = 2;
    opt.n = 1;
    CHECK_THROWS_AS(probe_odd_prime(opt), invalid_argument);
    opt.allow_even = true;
    CHECK(probe_odd_prime(opt).rows.size() == 4);
}

TEST_CASE("symmetrization is idempotent and does not change verdicts", "[explorer][property]") {
    RandomStream rng(13);
    const CodeSpace cs(3, 2);
    for (int t = 0; t < 15; ++t) {
        const FiniteSet conn = translated_ball(3, 2, 1, cs.element(rng.below(cs.size())));
        const FiniteSet once = symmetrize(conn);
        const FiniteSet twice = symmetrize(once);
        CHECK(once.subset_of(twice));
        CHECK(twice.subset_of(once));
        for (unsigned colors : {2u, 3u}) {
            CHECK(chromatic_exceeds(CayleyGraph(conn), colors).status == chromatic_exceeds(CayleyGraph(twice), colors).status);
        }
    }
}
