#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "recset/construction.hpp"
#include "recset/recurrence.hpp"

using namespace recset;

namespace {

const Verdict* find_check(const WitnessReport& rep, const std::string& check) {
    for (const auto& v : rep.verdicts)
        if (v.check == check) return &v;
    return nullptr;
}

} // namespace

TEST_CASE("rational parsing", "[construction]") {
    CHECK(parse_rational("0.1") == mpq_class(1, 10));
    CHECK(parse_rational("1/10") == mpq_class(1, 10));
    CHECK(parse_rational("2/20") == mpq_class(1, 10));
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational(".25") == mpq_class(1, 4));
    CHECK_THROWS_AS(parse_rational("abc"), invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), invalid_argument);
}

TEST_CASE("parameter validation", "[construction]") {
    const auto p = ConstructionParams::make(mpq_class(1, 10), {1, 2}, {4, 8});
    CHECK(p.m == std::vector<std::int64_t>{3, 6});
    CHECK(ConstructionParams::from_json(p.to_json()).to_json() == p.to_json());
    CHECK(p.dense_set(2).format() == "p=2;i=1;chain=(4,3),(8,6)");
    CHECK(p.pushed_set(2).format() == "p=2;i=0;chain=(4,2),(8,4)");
    CHECK_THROWS_AS(ConstructionParams::make(mpq_class(1, 10), {1, 2}, {4, 4}), invalid_argument);
    CHECK_THROWS_AS(ConstructionParams::make(mpq_class(1, 2), {1}, {4}), invalid_argument);
    CHECK_THROWS_AS(ConstructionParams::make(mpq_class(0), {1}, {4}), invalid_argument);
    CHECK_THROWS_AS(ConstructionParams::make(mpq_class(1, 10), {1}, {0}), invalid_argument);
}

TEST_CASE("scale choice picks the smallest sufficient scale", "[construction]") {
    const auto choice = choose_scales(mpq_class(1, 10), {1}, 12);
    const unsigned n1 = choice.params.n.at(0);
    CHECK(n1 <= 10);
    const auto d = density(NiveauSpec::parse("p=2;i=1;chain=(" + std::to_string(n1) + ",3)"));
    CHECK(d.lower >= mpq_class(2, 5));
    // every smaller scale misses the target, by direct exact counting
    for (unsigned n = 1; n < n1; ++n) {
        const auto spec = NiveauSpec::base(2, 1, n, 3);
        const mpq_class dens = niveau_empty(spec) ? mpq_class(0) : density(spec).upper;
        CHECK(dens < mpq_class(2, 5));
    }

    const auto easy = choose_scales(mpq_class(45, 100), {1}, 12);
    CHECK(easy.params.n.at(0) <= 5);
    CHECK(density(easy.params.dense_set(1)).lower >= mpq_class(1, 20));
}

TEST_CASE("scale scan densities increase with the scale", "[construction][property]") {
    const auto choice = choose_scales(mpq_class(1, 10), {1, 2}, 40);
    CHECK(choice.params.n == std::vector<unsigned>{10, 37});
    std::map<std::size_t, mpq_class> last;
    for (const auto& entry : choice.scan) {
        if (last.count(entry.level)) CHECK(entry.density.lower >= last[entry.level]);
        last[entry.level] = entry.density.upper;
        CHECK(entry.density.lower <= entry.density.upper);
    }
}

TEST_CASE("scale choice reports an exhausted cap", "[construction]") {
    try {
        choose_scales(mpq_class(1, 1000), {1}, 12);
        FAIL("expected a cap error");
    } catch (const cap_exceeded& e) {
        const std::string msg = e.what();
        CHECK(msg.find("cap exhausted at level 1") != std::string::npos);
        CHECK(msg.find("best density") != std::string::npos);
    }
    // a target of 1/1000 is reached at once
    CHECK(choose_scales(mpq_class(1, 2) - mpq_class(1, 1000), {1}, 12).params.n.at(0) == 3);
    CHECK_THROWS_AS(choose_scales(mpq_class(1, 10), {2, 1}, 12), invalid_argument);
    CHECK_THROWS_AS(choose_scales(mpq_class(1, 10), {0}, 12), invalid_argument);
}

TEST_CASE("the ball union", "[construction]") {
    const auto params = ConstructionParams::make(mpq_class(1, 10), {1, 2}, {2, 4});
    const auto s = witness_S(params);
    CHECK(s(make_ones(2, 4)));
    CHECK_FALSE(s(make_zero(2, 4)));

    // brute force: constant on quarter blocks and within 1 of the all-ones there, or within 2 at full scale
    std::uint64_t expect = 0;
    for (std::uint64_t idx = 0; idx < 65536; ++idx) {
        const auto c = oracle::from_index(idx, 2, 16);
        bool in = oracle::hamming(c, oracle::constant(16, 1)) <= 2;
        bool blockwise = true;
        std::uint64_t coarse_zeros = 0;
        for (int b = 0; b < 4; ++b) {
            for (int t = 1; t < 4; ++t) blockwise = blockwise && c[b * 4 + t] == c[b * 4];
            coarse_zeros += c[b * 4] == 0;
        }
        if (blockwise && coarse_zeros <= 1) in = true;
        expect += in;
    }
    CHECK(materialize(s).cardinality() == expect);
}

TEST_CASE("dense set levels", "[construction]") {
    const auto params = ConstructionParams::make(mpq_class(1, 10), {1, 2}, {4, 8});
    for (std::size_t l = 1; l <= 2; ++l) {
        const auto a = witness_A(params, l);
        CHECK(a(make_ones(2, params.n[l - 1])));
        CHECK_FALSE(a(make_zero(2, params.n[l - 1])));
    }
    CHECK_THROWS_AS(witness_A(params, 3), invalid_argument);

    // embedded level-1 members stay members at level 2
    NiveauSampler level1(params.dense_set(1));
    const auto level2 = witness_A(params, 2);
    RandomStream rng(77);
    for (int t = 0; t < 10000; ++t) REQUIRE(level2(embed(level1.draw_explicit(rng), 8)));
}

TEST_CASE("single-level exhaustive analog", "[construction]") {
    const auto rep = exhaustive_analog(1);
    CHECK(rep.status() == Status::proven);
    for (const auto& v : rep.verdicts) CHECK(v.proven());
    const auto diff = find_check(rep, "difference_avoidance");
    REQUIRE(diff != nullptr);
    CHECK(diff->mode == Mode::exhaustive);
    const auto j = rep.to_json();
    const auto& e = j["e_report"][0];
    CHECK(e["count_A"] == 2517);
    CHECK(e["count_E"] == 5034);
    CHECK(e["E_equals_twice_A"] == true);
    CHECK(j["levels"][0]["density"]["value"] == "2517/65536");

    // agrees with the independent pair check
    const auto independent = difference_avoids(materialize(NiveauSpec::parse("p=2;i=1;chain=(4,3)")),
                                               predicate(HammingBallSpec::V(2, 4, 3)));
    CHECK(independent.status == diff->status);
}

TEST_CASE("exhaustive two-level run at scale 4", "[construction]") {
    const auto params = ConstructionParams::make(mpq_class(1, 10), {1, 2}, {2, 4});
    const auto rep = verify_exhaustive(params, {}, 2, false);
    CHECK(rep.status() == Status::proven);
    CHECK(find_check(rep, "literal_sumset_avoidance") != nullptr);
    CHECK(find_check(rep, "shift_disjointness") != nullptr);
}

TEST_CASE("exhaustive verdicts agree with direct pair checks", "[construction][property]") {
    for (const auto& [k, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{1, 3}, {1, 4}, {2, 4}, {3, 4}}) {
        const auto params = ConstructionParams::make(mpq_class(1, 10), {k}, {n});
        const auto rep = verify_exhaustive(params, {}, 1, false);
        const auto a = materialize(params.dense_set(1));
        const auto independent = difference_avoids(a, predicate(params.ball(1)));
        const auto diff = find_check(rep, "difference_avoidance");
        REQUIRE(diff != nullptr);
        CHECK(diff->status == independent.status);
    }
}

TEST_CASE("degenerate parameters hold vacuously", "[construction]") {
    const auto params = ConstructionParams::make(mpq_class(1, 10), {3}, {4});
    const auto rep = verify_exhaustive(params, {}, 1, false);
    CHECK(rep.status() == Status::proven);
    bool flagged = false;
    for (const auto& w : rep.warnings) flagged = flagged || w.find("degenerate") != std::string::npos;
    CHECK(flagged);
}

TEST_CASE("sampled run at scales 4 and 8", "[construction]") {
    const auto params = ConstructionParams::make(mpq_class(1, 10), {1, 2}, {4, 8});
    const auto rep = verify_sampled(params, 100000, 42, {}, false);
    CHECK(rep.status() == Status::proven);
    for (const auto& v : rep.verdicts) {
        CHECK_FALSE(v.refuted());
        CHECK(v.completed());
    }
    const auto diff = find_check(rep, "difference_avoidance");
    REQUIRE(diff != nullptr);
    CHECK(diff->mode == Mode::sampled);
    CHECK(diff->parameters["seed"] == 42);
    CHECK(diff->budget_spent.at("pairs") >= 100000);
    const auto pushed = find_check(rep, "pushed_difference_avoidance");
    REQUIRE(pushed != nullptr);
    CHECK(pushed->budget_spent.at("pairs") >= 100000);
}

TEST_CASE("sampled runs are deterministic", "[construction]") {
    const auto params = ConstructionParams::make(mpq_class(1, 10), {1, 2}, {4, 12});
    const auto a = verify_sampled(params, 500, 9, {}, false).to_json();
    const auto b = verify_sampled(params, 500, 9, {}, false).to_json();
    CHECK(a.dump() == b.dump());
    const auto c = verify_sampled(params, 500, 10, {}, false).to_json();
    CHECK(c["seed"] == 10);
}
