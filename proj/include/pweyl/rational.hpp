#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "pweyl/error.hpp"

namespace pweyl {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// The rational numbers with arbitrary-precision coefficients.
struct QDom {
    using Elem = BigRat;

    bool operator==(const QDom&) const { return true; }
    bool operator!=(const QDom&) const { return false; }

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw AssertionError("division by zero in Q");
        return 1 / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    Elem from_int(std::int64_t v) const { return Elem(v); }

    Elem binom(std::uint64_t n, std::uint64_t k) const {
        if (k > n) return Elem(0);
        BigInt num = 1, den = 1;
        for (std::uint64_t i = 0; i < k; ++i) {
            num *= BigInt(n - i);
            den *= BigInt(i + 1);
        }
        return Elem(num / den);  // exact: binomials are integers
    }

    Elem falling(std::uint64_t n, std::uint64_t k) const {
        if (k > n) return Elem(0);
        BigInt r = 1;
        for (std::uint64_t i = 0; i < k; ++i) r *= BigInt(n - i);
        return Elem(r);
    }

    std::string str(const Elem& a) const {
        const BigInt num = boost::multiprecision::numerator(a);
        const BigInt den = boost::multiprecision::denominator(a);
        if (den == 1) return num.str();
        return num.str() + "/" + den.str();
    }
};

}  // namespace pweyl
