#pragma once

// Exact cardinalities of Hamming balls and niveau sets, exact rational
// densities, and certified enclosures of densities at scales whose counts
// are too large to hold.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "recset/core.hpp"
#include "recset/niveau.hpp"

namespace recset {

inline mpz_class binomial(std::uint64_t n, std::uint64_t k) {
    mpz_class r;
    if (k > n) return r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline mpz_class power(std::uint64_t base, std::uint64_t exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

/// Bits needed to hold |G_p^(n)| = p^(2^n), rounded up.
inline double group_bits(std::uint32_t p, unsigned n) {
    return std::ldexp(std::log2(static_cast<double>(p)), static_cast<int>(n));
}

inline void require_exact(std::uint32_t p, unsigned n, const Limits& limits, std::string_view what) {
    if (n > 62 || group_bits(p, n) > static_cast<double>(limits.exact_bits_cap))
        throw cap_exceeded(std::string(what) + " at p=" + std::to_string(p) + ", n=" + std::to_string(n) +
                           " needs more than " + std::to_string(limits.exact_bits_cap) + " bits (exact_bits_cap)");
}

/// |G_p^(n)|.
inline mpz_class group_order(std::uint32_t p, unsigned n, const Limits& limits = {}) {
    require_exact(p, n, limits, "group order");
    return power(p, std::uint64_t{1} << n);
}

/// |U(n,k)| = sum_{j<=k} C(2^n, j) (p-1)^j, independent of the center.
inline mpz_class count_hamming(const HammingBallSpec& spec) {
    const std::uint64_t len = std::uint64_t{1} << spec.n();
    const std::uint64_t top = std::min<std::uint64_t>(spec.k(), len);
    mpz_class total = 0;
    mpz_class term = 1;  // C(len, j) (p-1)^j
    for (std::uint64_t j = 0; j <= top; ++j) {
        if (j > 0) {
            term *= static_cast<unsigned long>(len - j + 1);
            term *= static_cast<unsigned long>(spec.p() - 1);
            mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(j));
        }
        total += term;
    }
    return total;
}

/// Number of g in G_p^(n) with level count of a fixed residue > 2^(n-1) + m.
inline mpz_class count_base_niveau(std::uint32_t p, unsigned n, std::int64_t m) {
    const std::uint64_t len = std::uint64_t{1} << n;
    const std::int64_t need = threshold_count(len, m);
    if (need > static_cast<std::int64_t>(len)) return 0;
    if (p == 2 && len % 2 == 0 && m >= 0) {
        // Symmetric tails: 2*count + (weights within m of len/2) = 2^len.
        const std::uint64_t lo = len / 2 - static_cast<std::uint64_t>(m);
        const std::uint64_t hi = len / 2 + static_cast<std::uint64_t>(m);
        mpz_class term = binomial(len, lo);
        mpz_class middle = 0;
        for (std::uint64_t w = lo; w <= hi; ++w) {
            if (w > lo) {
                term *= static_cast<unsigned long>(len - w + 1);
                mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(w));
            }
            middle += term;
        }
        mpz_class whole = power(2, len);
        whole -= middle;
        mpz_divexact_ui(whole.get_mpz_t(), whole.get_mpz_t(), 2);
        return whole;
    }
    mpz_class total = 0;
    const std::uint64_t start = static_cast<std::uint64_t>(std::max<std::int64_t>(need, 0));
    mpz_class term = binomial(len, start) * power(p - 1, len - start);
    for (std::uint64_t c = start; c <= len; ++c) {
        if (c > start) {
            // C(len,c)(p-1)^(len-c) from C(len,c-1)(p-1)^(len-c+1)
            term *= static_cast<unsigned long>(len - c + 1);
            mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(c));
            mpz_divexact_ui(term.get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(p - 1));
        }
        total += term;
    }
    return total;
}

namespace detail {

inline mpz_class count_chain(std::uint32_t p, std::span<const ChainLevel> chain, unsigned base) {
    const unsigned width = chain.front().n - base;
    if (chain.size() == 1) return count_base_niveau(p, width, chain.front().m);
    const std::uint64_t blocks = std::uint64_t{1} << width;
    const std::int64_t need = threshold_count(blocks, chain.front().m);
    if (need > static_cast<std::int64_t>(blocks)) return 0;
    const mpz_class a = count_chain(p, chain.subspan(1), chain.front().n);
    const mpz_class whole = power(p, std::uint64_t{1} << (chain.back().n - chain.front().n));
    const mpz_class rest = whole - a;
    mpz_class total = 0;
    mpz_class pa, pr;
    for (std::uint64_t t = static_cast<std::uint64_t>(std::max<std::int64_t>(need, 0)); t <= blocks; ++t) {
        mpz_pow_ui(pa.get_mpz_t(), a.get_mpz_t(), t);
        mpz_pow_ui(pr.get_mpz_t(), rest.get_mpz_t(), blocks - t);
        total += binomial(blocks, t) * pa * pr;
    }
    return total;
}

} // namespace detail

/// |A_i(chain)| as an exact integer; the same for every residue i.
inline mpz_class count_niveau(const NiveauSpec& spec, const Limits& limits = {}) {
    require_exact(spec.p(), spec.scale(), limits, "exact niveau count");
    return detail::count_chain(spec.p(), std::span<const ChainLevel>(spec.chain()), 0);
}

/// A density as a closed interval of exact rationals; lower == upper when exact.
struct Density {
    mpq_class lower;
    mpq_class upper;
    bool exact = true;

    static Density point(mpq_class q) {
        q.canonicalize();
        return {q, q, true};
    }
    bool certainly_at_least(const mpq_class& x) const { return lower >= x; }
    bool certainly_below(const mpq_class& x) const { return upper < x; }
};

/// Decimal annotation of a rational, truncated toward zero.
inline std::string to_decimal(const mpq_class& q, unsigned digits = 12) {
    mpz_class scaled = q.get_num() * power(10, digits);
    mpz_class whole;
    mpz_tdiv_q(whole.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
    const bool negative = whole < 0;
    if (negative) whole = -whole;
    std::string s = whole.get_str();
    if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
    return negative ? "-" + s : s;
}

inline std::string to_fraction(const mpq_class& q) { return q.get_str(); }

namespace detail {

/// RAII wrapper for an MPFR value at the working precision.
struct Real {
    mpfr_t v;
    explicit Real(mpfr_prec_t prec = 256) { mpfr_init2(v, prec); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
    ~Real() { mpfr_clear(v); }
};

inline mpq_class to_rational(const mpfr_t x) {
    if (mpfr_zero_p(x)) return 0;
    mpz_class z;
    const mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), x);
    mpq_class q(z);
    if (e >= 0) mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return q;
}

/// ln C(len, w) - len ln 2 bounded in direction `up`.
inline void log_binomial_mass(mpfr_t out, std::uint64_t len, std::uint64_t w, bool up, mpfr_prec_t prec) {
    const mpfr_rnd_t toward = up ? MPFR_RNDU : MPFR_RNDD;
    const mpfr_rnd_t away = up ? MPFR_RNDD : MPFR_RNDU;
    Real a(prec), b(prec), c(prec), arg(prec), ln2(prec);
    int sign = 0;
    mpfr_set_ui(arg.v, static_cast<unsigned long>(len), MPFR_RNDN);  // exact
    mpfr_add_ui(arg.v, arg.v, 1, MPFR_RNDN);
    mpfr_lgamma(a.v, &sign, arg.v, toward);
    mpfr_set_ui(arg.v, static_cast<unsigned long>(w), MPFR_RNDN);
    mpfr_add_ui(arg.v, arg.v, 1, MPFR_RNDN);
    mpfr_lgamma(b.v, &sign, arg.v, away);
    mpfr_set_ui(arg.v, static_cast<unsigned long>(len - w), MPFR_RNDN);
    mpfr_add_ui(arg.v, arg.v, 1, MPFR_RNDN);
    mpfr_lgamma(c.v, &sign, arg.v, away);
    mpfr_const_log2(ln2.v, away);
    mpfr_mul_ui(ln2.v, ln2.v, static_cast<unsigned long>(len), away);
    mpfr_sub(out, a.v, b.v, toward);
    mpfr_sub(out, out, c.v, toward);
    mpfr_sub(out, out, ln2.v, toward);
}

/// Enclosure of P(Bin(len, 1/2) > len/2 + m).
inline void base_enclosure(mpfr_t lo, mpfr_t hi, unsigned n, std::int64_t m, mpfr_prec_t prec) {
    const std::uint64_t len = std::uint64_t{1} << n;
    if (threshold_count(len, m) > static_cast<std::int64_t>(len)) {
        mpfr_set_zero(lo, 1);
        mpfr_set_zero(hi, 1);
        return;
    }
    if (n <= 12) {
        // Small enough to be exact.
        const mpq_class q(count_base_niveau(2, n, m), power(2, len));
        mpfr_set_q(lo, q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi, q.get_mpq_t(), MPFR_RNDU);
        return;
    }
    if (m < 0 || m > 1000000) throw cap_exceeded("margin too large for the certified enclosure");
    Real zlo(prec), zhi(prec), t(prec);
    mpfr_set_zero(zlo.v, 1);
    mpfr_set_zero(zhi.v, 1);
    for (std::uint64_t w = len / 2 - static_cast<std::uint64_t>(m); w <= len / 2 + static_cast<std::uint64_t>(m); ++w) {
        log_binomial_mass(t.v, len, w, false, prec);
        mpfr_exp(t.v, t.v, MPFR_RNDD);
        mpfr_add(zlo.v, zlo.v, t.v, MPFR_RNDD);
        log_binomial_mass(t.v, len, w, true, prec);
        mpfr_exp(t.v, t.v, MPFR_RNDU);
        mpfr_add(zhi.v, zhi.v, t.v, MPFR_RNDU);
    }
    // q = (1 - Z)/2
    mpfr_ui_sub(lo, 1, zhi.v, MPFR_RNDD);
    mpfr_div_2ui(lo, lo, 1, MPFR_RNDD);
    mpfr_ui_sub(hi, 1, zlo.v, MPFR_RNDU);
    mpfr_div_2ui(hi, hi, 1, MPFR_RNDU);
    if (mpfr_sgn(lo) < 0) mpfr_set_zero(lo, 1);
}

/// sum_{t >= need} C(blocks, t) q^t (1-q)^(blocks-t), rounded in direction `up`.
inline void upper_tail(mpfr_t out, std::uint64_t blocks, std::int64_t need, const mpfr_t q, bool up, mpfr_prec_t prec) {
    const mpfr_rnd_t r = up ? MPFR_RNDU : MPFR_RNDD;
    Real one_minus(prec), term(prec), f(prec), c(prec);
    mpfr_ui_sub(one_minus.v, 1, q, r);
    mpfr_set_zero(out, 1);
    for (std::uint64_t t = static_cast<std::uint64_t>(std::max<std::int64_t>(need, 0)); t <= blocks; ++t) {
        const mpz_class b = binomial(blocks, t);
        mpfr_set_z(c.v, b.get_mpz_t(), r);
        mpfr_pow_ui(term.v, q, static_cast<unsigned long>(t), r);
        mpfr_mul(term.v, term.v, c.v, r);
        mpfr_pow_ui(f.v, one_minus.v, static_cast<unsigned long>(blocks - t), r);
        mpfr_mul(term.v, term.v, f.v, r);
        mpfr_add(out, out, term.v, r);
    }
}

inline void chain_enclosure(mpfr_t lo, mpfr_t hi, std::span<const ChainLevel> chain, unsigned base, mpfr_prec_t prec) {
    const unsigned width = chain.front().n - base;
    if (chain.size() == 1) {
        base_enclosure(lo, hi, width, chain.front().m, prec);
        return;
    }
    const std::uint64_t blocks = std::uint64_t{1} << width;
    if (width > 24) throw cap_exceeded("certified enclosure supports at most 2^24 blocks per level");
    const std::int64_t need = threshold_count(blocks, chain.front().m);
    if (need > static_cast<std::int64_t>(blocks)) {
        mpfr_set_zero(lo, 1);
        mpfr_set_zero(hi, 1);
        return;
    }
    Real qlo(prec), qhi(prec);
    chain_enclosure(qlo.v, qhi.v, chain.subspan(1), chain.front().n, prec);
    // The tail probability is nondecreasing in q.
    upper_tail(lo, blocks, need, qlo.v, false, prec);
    upper_tail(hi, blocks, need, qhi.v, true, prec);
    if (mpfr_cmp_ui(hi, 1) > 0) mpfr_set_ui(hi, 1, MPFR_RNDN);
}

} // namespace detail

inline constexpr mpfr_prec_t enclosure_precision = 256;

/// Certified enclosure of density(A_i(chain)) for p = 2, with dyadic endpoints.
inline Density niveau_density_enclosure(const NiveauSpec& spec) {
    if (spec.p() != 2) throw cap_exceeded("certified density enclosures are implemented for p = 2 only");
    detail::Real lo(enclosure_precision), hi(enclosure_precision);
    detail::chain_enclosure(lo.v, hi.v, std::span<const ChainLevel>(spec.chain()), 0, enclosure_precision);
    Density d{detail::to_rational(lo.v), detail::to_rational(hi.v), false};
    if (d.lower == d.upper) d.exact = true;
    return d;
}

/// |A_i(chain)| / |G_p^(n_l)|: exact when the count fits exact_bits_cap, else a certified enclosure (p = 2).
inline Density density(const NiveauSpec& spec, const Limits& limits = {}) {
    if (spec.scale() <= 62 && group_bits(spec.p(), spec.scale()) <= static_cast<double>(limits.exact_bits_cap)) {
        mpq_class q(count_niveau(spec, limits), group_order(spec.p(), spec.scale(), limits));
        return Density::point(q);
    }
    return niveau_density_enclosure(spec);
}

inline Density density(const HammingBallSpec& spec, const Limits& limits = {}) {
    mpq_class q(count_hamming(spec), group_order(spec.p(), spec.n(), limits));
    return Density::point(q);
}

} // namespace recset
