#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pweyl/error.hpp"
#include "pweyl/fp.hpp"
#include "pweyl/monomial.hpp"
#include "pweyl/rational.hpp"

namespace pweyl {

/// Sparse multivariate polynomial over a coefficient domain D.
/// Terms are kept in a std::map keyed by exponent vector (plain lexicographic
/// std::vector order), which fixes a canonical form: equality of polynomials
/// is equality of the maps.  Zero coefficients are never stored.
template <class D>
struct MultiPoly {
    using Elem = typename D::Elem;

    D dom;
    int nvars = 0;
    std::map<Mono, Elem> terms;

    MultiPoly() = default;
    MultiPoly(D d, int nv) : dom(d), nvars(nv) {}

    static MultiPoly zero(D d, int nv) { return MultiPoly(d, nv); }

    static MultiPoly constant(D d, int nv, Elem c) {
        MultiPoly r(d, nv);
        if (!d.is_zero(c)) r.terms.emplace(mono_one(nv), c);
        return r;
    }

    static MultiPoly variable(D d, int nv, int i, std::uint16_t e = 1) {
        if (i < 0 || i >= nv) throw AssertionError("variable index out of range");
        MultiPoly r(d, nv);
        Mono m = mono_one(nv);
        m[(std::size_t)i] = e;
        if (!d.is_zero(d.one())) r.terms.emplace(std::move(m), d.one());
        return r;
    }

    static MultiPoly monomial(D d, int nv, const Mono& m, Elem c) {
        MultiPoly r(d, nv);
        if (!d.is_zero(c)) r.terms.emplace(m, c);
        return r;
    }

    bool is_zero() const { return terms.empty(); }

    bool is_constant() const {
        return terms.empty() || (terms.size() == 1 && total_degree(terms.begin()->first) == 0);
    }

    Elem constant_term() const {
        auto it = terms.find(mono_one(nvars));
        return it == terms.end() ? dom.zero() : it->second;
    }

    std::int64_t degree() const {  // total degree; -1 for the zero polynomial
        std::int64_t d = -1;
        for (auto& [m, c] : terms) d = std::max<std::int64_t>(d, total_degree(m));
        return d;
    }

    std::int64_t degree_in(int i) const {
        std::int64_t d = -1;
        for (auto& [m, c] : terms) d = std::max<std::int64_t>(d, m[(std::size_t)i]);
        return d;
    }

    void add_term(const Mono& m, Elem c) {
        if (dom.is_zero(c)) return;
        auto it = terms.find(m);
        if (it == terms.end()) {
            terms.emplace(m, c);
        } else {
            it->second = dom.add(it->second, c);
            if (dom.is_zero(it->second)) terms.erase(it);
        }
    }

    bool operator==(const MultiPoly& o) const {
        if (nvars != o.nvars || terms.size() != o.terms.size()) return false;
        auto it = terms.begin(), jt = o.terms.begin();
        for (; it != terms.end(); ++it, ++jt)
            if (it->first != jt->first || !dom.eq(it->second, jt->second)) return false;
        return true;
    }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }
};

template <class D>
void check_compatible(const MultiPoly<D>& a, const MultiPoly<D>& b) {
    if (a.dom != b.dom || a.nvars != b.nvars)
        throw DomainMismatchError("polynomials from different rings");
}

template <class D>
MultiPoly<D> operator+(const MultiPoly<D>& a, const MultiPoly<D>& b) {
    check_compatible(a, b);
    MultiPoly<D> r = a;
    for (auto& [m, c] : b.terms) r.add_term(m, c);
    return r;
}

template <class D>
MultiPoly<D> operator-(const MultiPoly<D>& a) {
    MultiPoly<D> r(a.dom, a.nvars);
    for (auto& [m, c] : a.terms) r.terms.emplace(m, a.dom.neg(c));
    return r;
}

template <class D>
MultiPoly<D> operator-(const MultiPoly<D>& a, const MultiPoly<D>& b) {
    check_compatible(a, b);
    MultiPoly<D> r = a;
    for (auto& [m, c] : b.terms) r.add_term(m, b.dom.neg(c));
    return r;
}

template <class D>
MultiPoly<D> operator*(const MultiPoly<D>& a, const MultiPoly<D>& b) {
    check_compatible(a, b);
    MultiPoly<D> r(a.dom, a.nvars);
    if (a.terms.empty() || b.terms.empty()) return r;
    for (auto& [ma, ca] : a.terms)
        for (auto& [mb, cb] : b.terms) r.add_term(mono_mul(ma, mb), a.dom.mul(ca, cb));
    return r;
}

template <class D>
MultiPoly<D> scal_mul(const typename D::Elem& c, const MultiPoly<D>& a) {
    MultiPoly<D> r(a.dom, a.nvars);
    if (a.dom.is_zero(c)) return r;
    for (auto& [m, v] : a.terms) {
        auto w = a.dom.mul(c, v);
        if (!a.dom.is_zero(w)) r.terms.emplace(m, w);
    }
    return r;
}

template <class D>
MultiPoly<D> poly_pow(const MultiPoly<D>& a, std::uint32_t e) {
    MultiPoly<D> r = MultiPoly<D>::constant(a.dom, a.nvars, a.dom.one());
    MultiPoly<D> base = a;
    while (e) {
        if (e & 1) r = r * base;
        if (e >>= 1) base = base * base;
    }
    return r;
}

/// Partial derivative with respect to variable i.
template <class D>
MultiPoly<D> poly_diff(const MultiPoly<D>& a, int i) {
    MultiPoly<D> r(a.dom, a.nvars);
    for (auto& [m, c] : a.terms) {
        std::uint16_t e = m[(std::size_t)i];
        if (e == 0) continue;
        Mono dm = m;
        dm[(std::size_t)i] = (std::uint16_t)(e - 1);
        r.add_term(dm, a.dom.mul(c, a.dom.from_int(e)));
    }
    return r;
}

/// Substitute images[i] for variable i; all images share a target ring.
template <class D>
MultiPoly<D> substitute(const MultiPoly<D>& a, const std::vector<MultiPoly<D>>& images) {
    if ((int)images.size() != a.nvars) throw AssertionError("substitute: wrong image count");
    for (auto& im : images)
        if (im.dom != a.dom) throw DomainMismatchError("substitute: domain mismatch");
    int tnv = images.empty() ? a.nvars : images[0].nvars;
    MultiPoly<D> r(a.dom, tnv);
    // cache powers of each image
    std::vector<std::vector<MultiPoly<D>>> pows((std::size_t)a.nvars);
    for (auto& [m, c] : a.terms) {
        MultiPoly<D> t = MultiPoly<D>::constant(a.dom, tnv, c);
        for (int i = 0; i < a.nvars; ++i) {
            std::uint16_t e = m[(std::size_t)i];
            if (!e) continue;
            auto& pv = pows[(std::size_t)i];
            if (pv.empty()) pv.push_back(images[(std::size_t)i]);  // pv[k] = image^(k+1)
            while (pv.size() < e) pv.push_back(pv.back() * images[(std::size_t)i]);
            t = t * pv[e - 1];
        }
        r = r + t;
    }
    return r;
}

/// Map coefficients into another domain (ring map), keeping monomials.
template <class D2, class D, class F>
MultiPoly<D2> map_coeffs(const MultiPoly<D>& a, D2 target, F f) {
    MultiPoly<D2> r(target, a.nvars);
    for (auto& [m, c] : a.terms) {
        auto v = f(c);
        if (!target.is_zero(v)) r.terms.emplace(m, v);
    }
    return r;
}

/// Reduce a rational-coefficient polynomial modulo p.  Throws BadPrimeError
/// if a denominator vanishes mod p.
inline MultiPoly<FpDom> reduce_mod_p(const MultiPoly<QDom>& a, std::uint32_t p) {
    FpDom fp(p);
    return map_coeffs(a, fp, [&](const BigRat& c) -> FpDom::Elem {
        BigInt num = boost::multiprecision::numerator(c);
        BigInt den = boost::multiprecision::denominator(c);
        BigInt pn = p;
        BigInt dm = den % pn;
        if (dm == 0) throw BadPrimeError("denominator divisible by " + std::to_string(p));
        BigInt nm = num % pn;
        if (nm < 0) nm += pn;
        FpDom::Elem n = (FpDom::Elem)(std::uint64_t)nm;
        FpDom::Elem d = (FpDom::Elem)(std::uint64_t)((dm < 0 ? dm + pn : dm));
        return fp.div(n, d);
    });
}

/// Entrywise lift F_p -> Z/p^2 using representatives in [0, p).
inline MultiPoly<Zp2Dom> lift_to_zp2(const MultiPoly<FpDom>& a) {
    Zp2Dom z2(a.dom.p);
    return map_coeffs(a, z2, [](FpDom::Elem c) -> Zp2Dom::Elem { return c; });
}

/// Reduction Z/p^2 -> F_p.
inline MultiPoly<FpDom> reduce_zp2(const MultiPoly<Zp2Dom>& a) {
    FpDom fp(a.dom.p);
    return map_coeffs(a, fp, [&](Zp2Dom::Elem c) -> FpDom::Elem { return (FpDom::Elem)(c % fp.p); });
}

/// Exact division by p of a Z/p^2 polynomial all of whose coefficients are
/// divisible by p; the result lives over F_p.
inline MultiPoly<FpDom> divide_by_p(const MultiPoly<Zp2Dom>& a) {
    FpDom fp(a.dom.p);
    return map_coeffs(a, fp, [&](Zp2Dom::Elem c) -> FpDom::Elem {
        if (c % fp.p != 0) throw AssertionError("coefficient not divisible by p");
        return (FpDom::Elem)(c / fp.p);
    });
}

/// Attempt exact division a / b; returns std::nullopt when b does not divide a.
template <class D>
std::optional<MultiPoly<D>> poly_divexact(const MultiPoly<D>& a, const MultiPoly<D>& b) {
    check_compatible(a, b);
    if (b.is_zero()) throw AssertionError("division by zero polynomial");
    MultiPoly<D> rem = a, quo(a.dom, a.nvars);
    // divide by the grevlex-leading term of b
    MonomialOrder ord = MonomialOrder::grevlex();
    auto lead = [&](const MultiPoly<D>& f) {
        auto best = f.terms.begin();
        for (auto it = f.terms.begin(); it != f.terms.end(); ++it)
            if (ord.cmp(it->first, best->first) > 0) best = it;
        return best;
    };
    auto lb = lead(b);
    while (!rem.is_zero()) {
        auto lr = lead(rem);
        if (!mono_divides(lb->first, lr->first)) return std::nullopt;
        Mono q = mono_div(lr->first, lb->first);
        auto c = rem.dom.div(lr->second, lb->second);
        quo.add_term(q, c);
        rem = rem - scal_mul(c, MultiPoly<D>::monomial(a.dom, a.nvars, q, a.dom.one()) * b);
    }
    return quo;
}

/// Deterministic printing: terms sorted grevlex-descending, coefficients in
/// the domain's own notation, '*' between factors, '^' for powers.
template <class D>
std::string poly_to_string(const MultiPoly<D>& a, const std::vector<std::string>& names) {
    if ((int)names.size() != a.nvars) throw AssertionError("poly_to_string: wrong name count");
    if (a.terms.empty()) return "0";
    std::vector<const std::pair<const Mono, typename D::Elem>*> ts;
    ts.reserve(a.terms.size());
    for (auto& t : a.terms) ts.push_back(&t);
    MonomialOrder ord = MonomialOrder::grevlex();
    std::sort(ts.begin(), ts.end(), [&](auto* x, auto* y) { return ord.cmp(x->first, y->first) > 0; });
    std::string out;
    for (auto* t : ts) {
        std::string c = a.dom.str(t->second);
        bool neg = !c.empty() && c[0] == '-';
        if (out.empty()) {
            if (neg) { out += "-"; c = c.substr(1); }
        } else {
            out += neg ? " - " : " + ";
            if (neg) c = c.substr(1);
        }
        std::string mono;
        for (int i = 0; i < a.nvars; ++i) {
            std::uint16_t e = t->first[(std::size_t)i];
            if (!e) continue;
            if (!mono.empty()) mono += "*";
            mono += names[(std::size_t)i];
            if (e > 1) mono += "^" + std::to_string(e);
        }
        if (mono.empty()) {
            out += c;
        } else if (c == "1") {
            out += mono;
        } else {
            out += c + "*" + mono;
        }
    }
    return out;
}

/// Names x1..xn for printing plain polynomials.
inline std::vector<std::string> coordinate_names(int n, const std::string& stem = "x") {
    std::vector<std::string> v;
    v.reserve((std::size_t)n);
    for (int i = 1; i <= n; ++i) v.push_back(stem + std::to_string(i));
    return v;
}

}  // namespace pweyl
