#pragma once

// Dense integer codes for the elements of a small G_p^(n).
//
// The code of g is its coefficient vector read as a base-p integer with
// coefficient 0 most significant. For p = 2 the coefficient at cylinder j is
// bit (L-1-j) of the code, L = 2^n, so codes are plain bit masks and the group
// operation is XOR.

#include <bit>
#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

#include "recset/core.hpp"
#include "recset/element.hpp"

namespace recset {

class CodeSpace {
public:
    CodeSpace(std::uint32_t p, unsigned n, const Limits& limits = {}) : p_(p), n_(n) {
        require_prime(p);
        if (n > 6) throw cap_exceeded(too_large(limits));
        length_ = std::uint64_t{1} << n;
        std::uint64_t total = 1;
        for (std::uint64_t j = 0; j < length_; ++j) {
            if (total > limits.enumeration_cap / p) throw cap_exceeded(too_large(limits));
            total *= p;
        }
        size_ = total;
        if (p != 2) {
            place_.assign(length_, 1);
            for (std::uint64_t j = length_; j-- > 1;) place_[j - 1] = place_[j] * p;
        }
    }

    std::uint32_t p() const { return p_; }
    unsigned n() const { return n_; }
    std::uint64_t length() const { return length_; }
    std::uint64_t size() const { return size_; }

    std::uint32_t digit(std::uint64_t code, std::uint64_t j) const {
        if (p_ == 2) return static_cast<std::uint32_t>((code >> (length_ - 1 - j)) & 1u);
        return static_cast<std::uint32_t>((code / place_[j]) % p_);
    }

    GroupElement element(std::uint64_t code) const {
        GroupElement g(p_, n_);
        for (std::uint64_t j = 0; j < length_; ++j) {
            const auto d = digit(code, j);
            if (d) g.set(j, d);
        }
        return g;
    }

    std::uint64_t code(const GroupElement& g) const {
        if (g.p() != p_ || g.n() != n_) throw invalid_argument("element does not belong to this code space");
        std::uint64_t c = 0;
        for (std::uint64_t j = 0; j < length_; ++j) c = c * p_ + g[j];
        return c;
    }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        if (p_ == 2) return a ^ b;
        std::uint64_t c = 0;
        for (std::uint64_t j = 0; j < length_; ++j) c = c * p_ + (digit(a, j) + digit(b, j)) % p_;
        return c;
    }

    std::uint64_t negate(std::uint64_t a) const {
        if (p_ == 2) return a;
        std::uint64_t c = 0;
        for (std::uint64_t j = 0; j < length_; ++j) c = c * p_ + (p_ - digit(a, j)) % p_;
        return c;
    }

    std::uint64_t subtract(std::uint64_t a, std::uint64_t b) const { return add(a, negate(b)); }

    /// Coefficients equal to `residue` among cylinders [first, first+len).
    std::uint64_t count(std::uint64_t code, std::uint32_t residue, std::uint64_t first, std::uint64_t len) const {
        if (p_ == 2) {
            const std::uint64_t shift = length_ - first - len;
            const std::uint64_t mask = len >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << len) - 1);
            const auto ones = static_cast<std::uint64_t>(std::popcount((code >> shift) & mask));
            return residue == 1 ? ones : len - ones;
        }
        std::uint64_t c = 0;
        for (std::uint64_t j = first; j < first + len; ++j) c += digit(code, j) == residue;
        return c;
    }

    /// Code of the constant x*1.
    std::uint64_t constant(std::uint32_t x) const {
        std::uint64_t c = 0;
        for (std::uint64_t j = 0; j < length_; ++j) c = c * p_ + x;
        return c;
    }

private:
    std::string too_large(const Limits& limits) const {
        return "scale too large to enumerate: p=" + std::to_string(p_) + ", n=" + std::to_string(n_) +
               " exceeds the enumeration cap of " + std::to_string(limits.enumeration_cap) + " elements";
    }

    std::uint32_t p_;
    unsigned n_;
    std::uint64_t length_ = 0;
    std::uint64_t size_ = 0;
    std::vector<std::uint64_t> place_;
};

/// Every element of G_p^(n) once, in code order.
class GroupRange {
public:
    class iterator {
    public:
        using value_type = GroupElement;
        using difference_type = std::ptrdiff_t;
        using iterator_category = std::input_iterator_tag;

        iterator(const CodeSpace* space, std::uint64_t code) : space_(space), code_(code) {}
        GroupElement operator*() const { return space_->element(code_); }
        iterator& operator++() {
            ++code_;
            return *this;
        }
        void operator++(int) { ++code_; }
        bool operator==(const iterator& o) const { return code_ == o.code_; }
        std::uint64_t code() const { return code_; }

    private:
        const CodeSpace* space_;
        std::uint64_t code_;
    };

    explicit GroupRange(CodeSpace space) : space_(std::move(space)) {}
    iterator begin() const { return {&space_, 0}; }
    iterator end() const { return {&space_, space_.size()}; }
    std::uint64_t size() const { return space_.size(); }
    const CodeSpace& space() const { return space_; }

private:
    CodeSpace space_;
};

inline GroupRange enumerate_group(std::uint32_t p, unsigned n, const Limits& limits = {}) {
    return GroupRange(CodeSpace(p, n, limits));
}

} // namespace recset
