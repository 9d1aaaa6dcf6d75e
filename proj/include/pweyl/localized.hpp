#pragma once

#include <cstdint>
#include <string>

#include "pweyl/error.hpp"
#include "pweyl/poly.hpp"

namespace pweyl {

/// Element of a localization O[1/g] with one fixed denominator polynomial g
/// per ring: values are num / g^k, kept canonical by cancelling every factor
/// of g out of the numerator.  Mixing elements with different g throws.
template <class D>
struct LocalizedPoly {
    MultiPoly<D> num;
    MultiPoly<D> den;  // the ring's denominator g (not this element's)
    std::uint32_t k = 0;

    LocalizedPoly() = default;
    LocalizedPoly(MultiPoly<D> n, MultiPoly<D> g, std::uint32_t pow) : num(std::move(n)), den(std::move(g)), k(pow) {
        if (den.is_zero() || den.is_constant())
            throw AssertionError("localization denominator must be nonconstant");
        normalize();
    }

    static LocalizedPoly from_poly(const MultiPoly<D>& f, const MultiPoly<D>& g) {
        return LocalizedPoly(f, g, 0);
    }

    void normalize() {
        if (num.is_zero()) { k = 0; return; }
        while (k > 0) {
            auto q = poly_divexact(num, den);
            if (!q) break;
            num = std::move(*q);
            --k;
        }
    }

    bool is_zero() const { return num.is_zero(); }

    bool operator==(const LocalizedPoly& o) const {
        check_ring(o);
        return k == o.k && num == o.num;  // canonical form
    }
    bool operator!=(const LocalizedPoly& o) const { return !(*this == o); }

    void check_ring(const LocalizedPoly& o) const {
        if (den != o.den) throw DomainMismatchError("localized elements with different denominators");
    }
};

template <class D>
LocalizedPoly<D> operator+(const LocalizedPoly<D>& a, const LocalizedPoly<D>& b) {
    a.check_ring(b);
    std::uint32_t k = std::max(a.k, b.k);
    auto lift = [&](const LocalizedPoly<D>& x) {
        MultiPoly<D> n = x.num;
        for (std::uint32_t i = x.k; i < k; ++i) n = n * x.den;
        return n;
    };
    return LocalizedPoly<D>(lift(a) + lift(b), a.den, k);
}

template <class D>
LocalizedPoly<D> operator-(const LocalizedPoly<D>& a) {
    LocalizedPoly<D> r = a;
    r.num = -r.num;
    return r;
}

template <class D>
LocalizedPoly<D> operator-(const LocalizedPoly<D>& a, const LocalizedPoly<D>& b) {
    return a + (-b);
}

template <class D>
LocalizedPoly<D> operator*(const LocalizedPoly<D>& a, const LocalizedPoly<D>& b) {
    a.check_ring(b);
    if ((std::uint64_t)a.k + b.k >= (1u << 20)) throw DenominatorEscapeError("denominator power blow-up");
    return LocalizedPoly<D>(a.num * b.num, a.den, a.k + b.k);
}

/// d/dx_i via the quotient rule: (num' g - k num g') / g^(k+1).
template <class D>
LocalizedPoly<D> localized_diff(const LocalizedPoly<D>& a, int i) {
    auto gp = poly_diff(a.den, i);
    auto n = poly_diff(a.num, i) * a.den;
    if (a.k > 0) {
        auto kc = MultiPoly<D>::constant(a.num.dom, a.num.nvars, a.num.dom.from_int((std::int64_t)a.k));
        n = n - kc * a.num * gp;
    }
    return LocalizedPoly<D>(n, a.den, a.k + 1);
}

template <class D>
std::string localized_to_string(const LocalizedPoly<D>& a, const std::vector<std::string>& names) {
    std::string s = poly_to_string(a.num, names);
    if (a.k == 0) return s;
    std::string d = "(" + poly_to_string(a.den, names) + ")";
    if (a.k > 1) d += "^" + std::to_string(a.k);
    return "(" + s + ")/" + d;
}

}  // namespace pweyl
