#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "oracles.hpp"
#include "recset/codes.hpp"
#include "recset/counting.hpp"
#include "recset/finite_set.hpp"
#include "recset/niveau.hpp"

using namespace recset;

namespace {

using Chain = std::vector<std::pair<unsigned, std::int64_t>>;

NiveauSpec spec_of(std::uint32_t p, std::uint32_t i, const Chain& c) {
    std::vector<ChainLevel> levels;
    for (auto [n, m] : c) levels.push_back({n, m});
    return {p, i, levels};
}

std::uint64_t enumerate_count(std::uint32_t p, std::uint32_t i, const Chain& c) {
    const unsigned n = c.back().first;
    const std::uint64_t length = std::uint64_t{1} << n;
    std::uint64_t total = 0;
    for (std::uint64_t idx = 0; idx < oracle::group_size(p, n); ++idx)
        total += oracle::niveau(oracle::from_index(idx, p, length), i, c);
    return total;
}

std::uint64_t enumerate_ball(std::uint32_t p, unsigned n, std::uint64_t k, const oracle::Coeffs& center) {
    const std::uint64_t length = std::uint64_t{1} << n;
    std::uint64_t total = 0;
    for (std::uint64_t idx = 0; idx < oracle::group_size(p, n); ++idx)
        total += oracle::hamming(oracle::from_index(idx, p, length), center) <= k;
    return total;
}

} // namespace

TEST_CASE("ball membership", "[ball]") {
    const auto u0 = HammingBallSpec::U(2, 2, 0);
    CHECK(in_hamming(make_zero(2, 2), u0));
    for (const auto& g : enumerate_group(2, 2))
        if (level_count(g, 1) == 1) CHECK_FALSE(in_hamming(g, u0));

    // lower-scale elements are embedded before measuring distance
    CHECK(in_hamming(make_ones(2, 1), HammingBallSpec::V(2, 3, 0)));
    CHECK_THROWS_AS(in_hamming(make_ones(2, 3), HammingBallSpec::V(2, 2, 1)), invalid_argument);
}

TEST_CASE("ball counts against enumeration", "[ball]") {
    CHECK(count_hamming(HammingBallSpec::U(2, 2, 1)) == 5);
    CHECK(count_hamming(HammingBallSpec::U(3, 2, 1)) == 9);
    for (unsigned n = 0; n <= 4; ++n) {
        const std::uint64_t length = std::uint64_t{1} << n;
        CHECK(count_hamming(HammingBallSpec::U(2, n, length)) == group_order(2, n));
        for (std::uint64_t k = 0; k <= length; ++k) {
            const std::uint64_t expect = enumerate_ball(2, n, k, oracle::constant(length, 1));
            CHECK(count_hamming(HammingBallSpec::V(2, n, k)) == expect);
            CHECK(materialize(HammingBallSpec::V(2, n, k)).cardinality() == expect);
        }
    }
    for (unsigned n = 0; n <= 2; ++n)
        for (std::uint64_t k = 0; k <= (std::uint64_t{1} << n); ++k) {
            const std::uint64_t length = std::uint64_t{1} << n;
            CHECK(count_hamming(HammingBallSpec::V(3, n, k)) == enumerate_ball(3, n, k, oracle::constant(length, 1)));
            const auto center = GroupElement::decode("p=3;n=1;21");
            if (n >= 1) {
                const HammingBallSpec s(3, n, k, center);
                CHECK(materialize(s).cardinality() == enumerate_ball(3, n, k, oracle::from_element(embed(center, n))));
            }
        }
    CHECK(density(HammingBallSpec::U(2, 3, 8)).lower == 1);
    CHECK_THROWS_AS(HammingBallSpec::U(2, 2, 5), invalid_argument);
}

TEST_CASE("V(2,1) and U(2,1) are disjoint", "[ball]") {
    const auto v = materialize(HammingBallSpec::V(2, 2, 1));
    const auto u = materialize(HammingBallSpec::U(2, 2, 1));
    CHECK(v.cardinality() == 5);
    CHECK(v.disjoint_from(u));
    v.for_each([&](std::uint64_t c) { CHECK(level_count(v.space().element(c), 1) >= 3); });
}

TEST_CASE("spec text round trip", "[ball]") {
    for (const std::string s : {"p=2;n=2;k=1;center=U", "p=2;n=4;k=3;center=V", "p=3;n=2;k=1;center=21@1"})
        CHECK(HammingBallSpec::parse(s).format() == s);
    for (const std::string s : {"p=2;i=1;chain=(2,1)", "p=2;i=0;chain=(1,0),(3,2),(4,1)", "p=3;i=2;chain=(2,0)"})
        CHECK(NiveauSpec::parse(s).format() == s);

    CHECK_THROWS_AS(NiveauSpec::parse("p=2;i=1;chain=(2,0)", true), invalid_argument);
    CHECK_NOTHROW(NiveauSpec::parse("p=2;i=1;chain=(2,0)"));
    CHECK_THROWS_AS(NiveauSpec::parse("p=2;i=1;chain=(3,1),(2,1)"), invalid_argument);
    CHECK_THROWS_AS(NiveauSpec::parse("p=2;i=2;chain=(2,1)"), invalid_argument);
    CHECK_THROWS_AS(NiveauSpec::parse("p=2;i=1;chain="), invalid_argument);
    CHECK_THROWS_AS(NiveauSpec::parse("p=4;i=1;chain=(2,1)"), invalid_argument);
    CHECK_THROWS_AS(HammingBallSpec::parse("p=2;n=2;k=1;center=W"), invalid_argument);

    const auto spec = NiveauSpec::parse("p=2;i=1;chain=(1,0),(3,2),(4,1)");
    CHECK(spec.tail().format() == "p=2;i=1;chain=(2,2),(3,1)");
}

TEST_CASE("niveau membership fixtures", "[niveau]") {
    const auto a = NiveauSpec::parse("p=2;i=1;chain=(2,1)");
    for (const auto& g : enumerate_group(2, 2)) CHECK(in_niveau(g, a) == (g == make_ones(2, 2)));
    CHECK_THROWS_AS(in_niveau(make_ones(2, 3), a), invalid_argument);

    CHECK(in_block_extension(make_ones(2, 4), make_ones(2, 2), 1));
    CHECK_FALSE(in_block_extension(make_ones(2, 4), make_zero(2, 2), 1));
}

TEST_CASE("niveau membership agrees with the recursive definition", "[niveau][property]") {
    const std::vector<Chain> chains = {{{1, 0}}, {{2, 1}}, {{3, 0}}, {{1, 0}, {3, 1}}, {{2, 0}, {3, 0}},
                                       {{1, 0}, {2, 0}, {3, 0}}, {{2, 0}, {4, 1}}, {{1, 0}, {3, 0}, {4, 0}}};
    RandomStream rng(9);
    for (const auto& c : chains)
        for (std::uint32_t i : {0u, 1u}) {
            const auto spec = spec_of(2, i, c);
            const unsigned n = c.back().first;
            const CodeSpace cs(2, n);
            const std::uint64_t step = n == 4 ? 97 : 1;
            for (std::uint64_t code = 0; code < cs.size(); code += step) {
                const auto coeffs = oracle::from_index(code, 2, std::uint64_t{1} << n);
                const bool expect = oracle::niveau(coeffs, i, c);
                CHECK(in_niveau(cs.element(code), spec) == expect);
                CHECK(in_niveau(cs, code, spec) == expect);
            }
        }
}

TEST_CASE("niveau counts against enumeration", "[niveau][oracle]") {
    CHECK(count_niveau(NiveauSpec::parse("p=2;i=1;chain=(2,1)")) == 1);
    CHECK(count_niveau(NiveauSpec::parse("p=2;i=1;chain=(3,1)")) == 37);
    CHECK(count_niveau(NiveauSpec::parse("p=2;i=1;chain=(2,0),(4,1)")) == 61);
    CHECK(count_niveau(NiveauSpec::parse("p=2;i=1;chain=(4,3)")) == 2517);

    // every chain over scales <= 3, margins 0..2, both residues
    std::vector<Chain> chains;
    const std::vector<std::vector<unsigned>> scale_sets = {{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}};
    for (const auto& scales : scale_sets) {
        std::vector<Chain> partial = {{}};
        for (unsigned n : scales) {
            std::vector<Chain> grown;
            for (const auto& c : partial)
                for (std::int64_t m = 0; m <= 2; ++m) {
                    auto d = c;
                    d.push_back({n, m});
                    grown.push_back(d);
                }
            partial = grown;
        }
        chains.insert(chains.end(), partial.begin(), partial.end());
    }
    std::size_t checked = 0;
    for (const auto& c : chains)
        for (std::uint32_t i : {0u, 1u}) {
            CHECK(count_niveau(spec_of(2, i, c)) == enumerate_count(2, i, c));
            ++checked;
        }
    // a few scale-4 chains
    for (const Chain& c : std::vector<Chain>{{{4, 0}}, {{4, 3}}, {{1, 0}, {4, 2}}, {{2, 1}, {4, 0}}, {{1, 0}, {3, 1}, {4, 0}}}) {
        CHECK(count_niveau(spec_of(2, 1, c)) == enumerate_count(2, 1, c));
        ++checked;
    }
    // odd primes
    for (const Chain& c : std::vector<Chain>{{{1, 0}}, {{2, 0}}, {{2, 1}}, {{1, 0}, {2, 0}}})
        for (std::uint32_t i : {0u, 1u, 2u}) {
            CHECK(count_niveau(spec_of(3, i, c)) == enumerate_count(3, i, c));
            ++checked;
        }
    CHECK(checked >= 50);
}

TEST_CASE("materialized niveau sets", "[niveau]") {
    CHECK(materialize(NiveauSpec::parse("p=2;i=1;chain=(2,1)")).cardinality() == 1);
    CHECK(materialize(HammingBallSpec::U(2, 4, 16)).cardinality() == 65536);
    const auto a = materialize(NiveauSpec::parse("p=2;i=1;chain=(1,0),(3,1),(4,0)"));
    CHECK(a.cardinality() == count_niveau(NiveauSpec::parse("p=2;i=1;chain=(1,0),(3,1),(4,0)")));
}

TEST_CASE("densities", "[niveau]") {
    const auto d = density(NiveauSpec::parse("p=2;i=1;chain=(2,1)"));
    CHECK(d.exact);
    CHECK(d.lower == mpq_class(1, 16));
    CHECK(d.upper == mpq_class(1, 16));
}

TEST_CASE("certified enclosures contain the exact density", "[niveau][property]") {
    // exact counts here need 2^n bits; forcing a small exact cap exercises the enclosure path
    Limits small;
    small.exact_bits_cap = 64;
    Limits big;
    big.exact_bits_cap = std::uint64_t{1} << 16;
    for (const std::string s : {"p=2;i=1;chain=(8,1)", "p=2;i=1;chain=(10,3)", "p=2;i=1;chain=(3,0),(9,2)",
                                "p=2;i=0;chain=(2,0),(7,1),(10,1)"}) {
        const auto spec = NiveauSpec::parse(s);
        const auto exact = density(spec, big);
        const auto enc = density(spec, small);
        REQUIRE(exact.exact);
        // the enclosure may collapse to a point when 256 bits represent the value exactly
        if (enc.exact) CHECK(enc.lower == exact.lower);
        CHECK(enc.lower <= exact.lower);
        CHECK(exact.upper <= enc.upper);
        CHECK(mpq_class(enc.upper - enc.lower) < mpq_class(1, 1000000));
    }
    CHECK_THROWS_AS(count_niveau(NiveauSpec::parse("p=2;i=1;chain=(20,1)")), cap_exceeded);
}

TEST_CASE("finite set persistence", "[niveau]") {
    const auto spec = NiveauSpec::parse("p=2;i=1;chain=(2,0),(4,1)");
    const auto set = materialize(spec);
    const auto path = (std::filesystem::temp_directory_path() / "recset_test_set.rle").string();
    set.save(path, spec.format());
    const auto loaded = FiniteSet::load(path, {});
    CHECK(loaded.spec == spec.format());
    CHECK(loaded.set.cardinality() == 61);
    CHECK(loaded.set.subset_of(set));
    CHECK(set.subset_of(loaded.set));
    std::filesystem::remove(path);
}

TEST_CASE("block distance matches the literal sumset", "[niveau][property]") {
    for (const std::string s : {"p=2;i=1;chain=(2,1)", "p=2;i=1;chain=(3,1)", "p=2;i=0;chain=(1,0),(3,1)"}) {
        const auto a = materialize(NiveauSpec::parse(s));
        for (unsigned scale = 1; scale <= a.n(); ++scale) {
            const auto dist = block_distance(a, scale);
            for (std::uint64_t k = 0; k <= std::min<std::uint64_t>(3, std::uint64_t{1} << scale); ++k) {
                FiniteSet ball(2, a.n());
                const auto u = HammingBallSpec::U(2, scale, k);
                for (const auto& g : enumerate_group(2, scale))
                    if (in_hamming(g, u)) ball.insert(embed(g, a.n()));
                const auto sum = a.sumset(ball);
                for (std::uint64_t c = 0; c < a.universe(); ++c) CHECK(sum.contains(c) == (dist[c] <= k));
            }
        }
    }
}
