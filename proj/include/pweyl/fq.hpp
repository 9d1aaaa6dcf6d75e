#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pweyl/error.hpp"
#include "pweyl/fp.hpp"
#include "pweyl/poly.hpp"
#include "pweyl/rational.hpp"

namespace pweyl {

// ---------------------------------------------------------------------------
// Dense univariate polynomials over a field domain K (FpDom or FqDom below).
// Coefficients are stored low to high with no trailing zeros; the zero
// polynomial is the empty vector and has degree -1.
// ---------------------------------------------------------------------------

template <class K>
struct UniPoly {
    using Elem = typename K::Elem;

    K dom;
    std::vector<Elem> c;

    UniPoly() = default;
    explicit UniPoly(K d) : dom(d) {}
    UniPoly(K d, std::vector<Elem> coeffs) : dom(d), c(std::move(coeffs)) { normalize(); }

    void normalize() {
        while (!c.empty() && dom.is_zero(c.back())) c.pop_back();
    }

    static UniPoly zero(K d) { return UniPoly(d); }
    static UniPoly one(K d) { return UniPoly(d, {d.one()}); }
    static UniPoly xpow(K d, int k) {
        std::vector<Elem> v((std::size_t)k + 1, d.zero());
        v.back() = d.one();
        return UniPoly(d, std::move(v));
    }
    static UniPoly constant(K d, Elem a) { return UniPoly(d, {a}); }

    int deg() const { return (int)c.size() - 1; }
    bool is_zero() const { return c.empty(); }
    Elem coeff(int i) const { return i >= 0 && i < (int)c.size() ? c[(std::size_t)i] : dom.zero(); }
    Elem lead() const {
        if (is_zero()) throw AssertionError("leading coefficient of zero polynomial");
        return c.back();
    }

    bool operator==(const UniPoly& o) const {
        if (c.size() != o.c.size()) return false;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!dom.eq(c[i], o.c[i])) return false;
        return true;
    }
    bool operator!=(const UniPoly& o) const { return !(*this == o); }

    Elem eval(const Elem& x) const {
        Elem r = dom.zero();
        for (std::size_t i = c.size(); i-- > 0;) r = dom.add(dom.mul(r, x), c[i]);
        return r;
    }
};

template <class K>
UniPoly<K> operator+(const UniPoly<K>& a, const UniPoly<K>& b) {
    std::vector<typename K::Elem> v(std::max(a.c.size(), b.c.size()), a.dom.zero());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.dom.add(a.coeff((int)i), b.coeff((int)i));
    return UniPoly<K>(a.dom, std::move(v));
}

template <class K>
UniPoly<K> operator-(const UniPoly<K>& a, const UniPoly<K>& b) {
    std::vector<typename K::Elem> v(std::max(a.c.size(), b.c.size()), a.dom.zero());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.dom.sub(a.coeff((int)i), b.coeff((int)i));
    return UniPoly<K>(a.dom, std::move(v));
}

template <class K>
UniPoly<K> operator-(const UniPoly<K>& a) {
    UniPoly<K> r = a;
    for (auto& x : r.c) x = a.dom.neg(x);
    return r;
}

template <class K>
UniPoly<K> operator*(const UniPoly<K>& a, const UniPoly<K>& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly<K>::zero(a.dom);
    std::vector<typename K::Elem> v(a.c.size() + b.c.size() - 1, a.dom.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.dom.is_zero(a.c[i])) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            v[i + j] = a.dom.add(v[i + j], a.dom.mul(a.c[i], b.c[j]));
    }
    return UniPoly<K>(a.dom, std::move(v));
}

template <class K>
UniPoly<K> uni_scal(const typename K::Elem& s, const UniPoly<K>& a) {
    UniPoly<K> r = a;
    for (auto& x : r.c) x = a.dom.mul(s, x);
    r.normalize();
    return r;
}

template <class K>
UniPoly<K> uni_monic(const UniPoly<K>& a) {
    if (a.is_zero()) return a;
    return uni_scal(a.dom.inv(a.lead()), a);
}

template <class K>
std::pair<UniPoly<K>, UniPoly<K>> uni_divmod(const UniPoly<K>& a, const UniPoly<K>& b) {
    if (b.is_zero()) throw AssertionError("univariate division by zero");
    UniPoly<K> q = UniPoly<K>::zero(a.dom), r = a;
    auto linv = a.dom.inv(b.lead());
    while (!r.is_zero() && r.deg() >= b.deg()) {
        int shift = r.deg() - b.deg();
        auto f = a.dom.mul(r.lead(), linv);
        std::vector<typename K::Elem> qc((std::size_t)shift + 1, a.dom.zero());
        qc.back() = f;
        UniPoly<K> term(a.dom, std::move(qc));
        q = q + term;
        r = r - term * b;
    }
    return {q, r};
}

template <class K>
UniPoly<K> uni_mod(const UniPoly<K>& a, const UniPoly<K>& b) {
    return uni_divmod(a, b).second;
}

template <class K>
UniPoly<K> uni_gcd(UniPoly<K> a, UniPoly<K> b) {
    while (!b.is_zero()) {
        auto r = uni_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return uni_monic(a);
}

template <class K>
UniPoly<K> uni_diff(const UniPoly<K>& a) {
    if (a.deg() <= 0) return UniPoly<K>::zero(a.dom);
    std::vector<typename K::Elem> v((std::size_t)a.deg(), a.dom.zero());
    for (int i = 1; i <= a.deg(); ++i) v[(std::size_t)i - 1] = a.dom.mul(a.dom.from_int(i), a.c[(std::size_t)i]);
    return UniPoly<K>(a.dom, std::move(v));
}

template <class K>
UniPoly<K> uni_powmod(const UniPoly<K>& base, const BigInt& e, const UniPoly<K>& mod) {
    if (mod.deg() < 1) throw AssertionError("powmod modulus must have positive degree");
    UniPoly<K> r = UniPoly<K>::one(base.dom);
    UniPoly<K> b = uni_mod(base, mod);
    BigInt k = e;
    while (k > 0) {
        if (boost::multiprecision::bit_test(k, 0)) r = uni_mod(r * b, mod);
        b = uni_mod(b * b, mod);
        k >>= 1;
    }
    return r;
}

/// Inverse of a modulo m via the extended Euclid algorithm; nullopt when
/// gcd(a, m) is not a unit.
template <class K>
std::optional<UniPoly<K>> uni_modinv(const UniPoly<K>& a, const UniPoly<K>& m) {
    if (m.deg() < 1) throw AssertionError("modular inverse needs a modulus of positive degree");
    auto r0 = m, r1 = uni_mod(a, m);
    auto t0 = UniPoly<K>::zero(a.dom), t1 = UniPoly<K>::one(a.dom);
    while (!r1.is_zero()) {
        auto [q, r] = uni_divmod(r0, r1);
        r0 = r1; r1 = r;
        auto nt = t0 - q * t1;
        t0 = t1; t1 = nt;
    }
    if (r0.deg() != 0) return std::nullopt;
    return uni_mod(uni_scal(a.dom.inv(r0.coeff(0)), t0), m);
}

/// Exact p-th root of a polynomial of the form u(x^p): picks out the
/// coefficients at multiples of p and applies the inverse Frobenius.
template <class K>
UniPoly<K> uni_pth_root(const UniPoly<K>& a, std::uint32_t p) {
    std::vector<typename K::Elem> v;
    for (int i = 0; i <= a.deg(); ++i) {
        if (i % (int)p == 0)
            v.push_back(a.dom.pth_root(a.c[(std::size_t)i]));
        else if (!a.dom.is_zero(a.c[(std::size_t)i]))
            throw AssertionError("polynomial is not a p-th power");
    }
    return UniPoly<K>(a.dom, std::move(v));
}

// ---------------------------------------------------------------------------
// F_q, the field with p^m elements, as F_p[t] modulo the first irreducible
// monic polynomial of degree m in enumeration order.  Elements are coefficient
// vectors of length m (low to high in t).
// ---------------------------------------------------------------------------

namespace detail {
bool fp_is_irreducible(const UniPoly<FpDom>& f);
}

struct FqDom {
    using Elem = std::vector<std::uint32_t>;

    FpDom base;
    std::uint32_t p = 0;
    int m = 1;
    std::vector<std::uint32_t> modulus;  // monic, length m+1

    FqDom() = default;
    FqDom(std::uint32_t prime, int degree) : base(prime), p(prime), m(degree) {
        if (degree < 1 || degree > 16) throw AssertionError("extension degree out of range");
        double sz = 1;
        for (int i = 0; i < degree; ++i) sz *= prime;
        if (sz >= 9.2e18) throw AssertionError("field too large to enumerate");
        if (degree == 1) {
            modulus = {0, 1};  // t itself: t = 0, the prime field
            return;
        }
        // first monic irreducible of degree m: scan constant terms upward in
        // the base-p enumeration of the lower coefficients
        std::uint64_t total = 1;
        for (int i = 0; i < degree; ++i) total *= prime;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::vector<std::uint32_t> cand((std::size_t)degree + 1, 0);
            std::uint64_t v = idx;
            for (int i = 0; i < degree; ++i) {
                cand[(std::size_t)i] = (std::uint32_t)(v % prime);
                v /= prime;
            }
            cand.back() = 1;
            UniPoly<FpDom> f(base, std::vector<std::uint32_t>(cand.begin(), cand.end()));
            if (detail::fp_is_irreducible(f)) {
                modulus = std::move(cand);
                return;
            }
        }
        throw AssertionError("no irreducible polynomial found");  // unreachable
    }

    bool operator==(const FqDom& o) const { return p == o.p && modulus == o.modulus; }
    bool operator!=(const FqDom& o) const { return !(*this == o); }

    std::uint64_t size() const {
        std::uint64_t s = 1;
        for (int i = 0; i < m; ++i) s *= p;
        return s;
    }

    Elem zero() const { return Elem((std::size_t)m, 0); }
    Elem one() const {
        Elem e = zero();
        e[0] = 1 % p;
        return e;
    }
    Elem gen() const {
        Elem e = zero();
        if (m == 1)
            e[0] = 0;  // t = 0 in the prime field
        else
            e[1] = 1;
        return e;
    }

    bool is_zero(const Elem& a) const {
        for (auto x : a)
            if (x) return false;
        return true;
    }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }

    Elem embed(FpDom::Elem a) const {
        Elem e = zero();
        e[0] = a;
        return e;
    }

    Elem add(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (int i = 0; i < m; ++i) r[(std::size_t)i] = base.add(r[(std::size_t)i], b[(std::size_t)i]);
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Elem r = a;
        for (int i = 0; i < m; ++i) r[(std::size_t)i] = base.sub(r[(std::size_t)i], b[(std::size_t)i]);
        return r;
    }
    Elem neg(const Elem& a) const {
        Elem r = a;
        for (auto& x : r) x = base.neg(x);
        return r;
    }

    Elem mul(const Elem& a, const Elem& b) const {
        std::vector<std::uint64_t> acc((std::size_t)(2 * m - 1), 0);
        for (int i = 0; i < m; ++i) {
            if (!a[(std::size_t)i]) continue;
            for (int j = 0; j < m; ++j)
                acc[(std::size_t)(i + j)] =
                    (acc[(std::size_t)(i + j)] + (std::uint64_t)a[(std::size_t)i] * b[(std::size_t)j]) % p;
        }
        // reduce by the monic modulus: t^m = -(lower part)
        for (int k = 2 * m - 2; k >= m; --k) {
            std::uint64_t c = acc[(std::size_t)k];
            if (!c) continue;
            acc[(std::size_t)k] = 0;
            for (int i = 0; i < m; ++i) {
                std::uint64_t sub_ = c * modulus[(std::size_t)i] % p;
                auto& slot = acc[(std::size_t)(k - m + i)];
                slot = (slot + p - sub_) % p;
            }
        }
        Elem r = zero();
        for (int i = 0; i < m; ++i) r[(std::size_t)i] = (std::uint32_t)acc[(std::size_t)i];
        return r;
    }

    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    Elem inv(const Elem& a) const {
        if (is_zero(a)) throw AssertionError("division by zero in F_q");
        // a^(q-2); q <= 2^62 so the exponent fits a word
        return pow(a, size() - 2);
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

    Elem from_int(std::int64_t v) const { return embed(base.from_int(v)); }

    Elem element(std::uint64_t index) const {
        Elem e = zero();
        for (int i = 0; i < m; ++i) {
            e[(std::size_t)i] = (std::uint32_t)(index % p);
            index /= p;
        }
        return e;
    }
    std::uint64_t index_of(const Elem& a) const {
        std::uint64_t idx = 0;
        for (int i = m; i-- > 0;) idx = idx * p + a[(std::size_t)i];
        return idx;
    }

    /// Inverse Frobenius: the p-th root is a^(q/p).
    Elem pth_root(const Elem& a) const { return pow(a, size() / p); }

    Elem binom(std::uint64_t n, std::uint64_t k) const { return embed(base.binom(n, k)); }
    Elem falling(std::uint64_t n, std::uint64_t k) const { return embed(base.falling(n, k)); }

    std::string str(const Elem& a) const {
        std::string s;
        for (int i = m; i-- > 0;) {
            if (!a[(std::size_t)i]) continue;
            if (!s.empty()) s += " + ";
            if (i == 0 || a[(std::size_t)i] != 1) s += std::to_string(a[(std::size_t)i]);
            if (i > 0 && a[(std::size_t)i] != 1) s += "*";
            if (i > 0) s += "t";
            if (i > 1) s += "^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }
};

// ---------------------------------------------------------------------------
// Factorization over F_p and root extraction over F_p / F_q.
// ---------------------------------------------------------------------------

namespace detail {

inline bool fp_is_irreducible(const UniPoly<FpDom>& f) {
    int m = f.deg();
    if (m < 1) return false;
    if (m == 1) return true;
    const std::uint32_t p = f.dom.p;
    UniPoly<FpDom> x = UniPoly<FpDom>::xpow(f.dom, 1);
    // h_i = x^(p^i) mod f
    std::vector<UniPoly<FpDom>> h((std::size_t)m + 1);
    h[0] = uni_mod(x, f);
    for (int i = 1; i <= m; ++i) h[(std::size_t)i] = uni_powmod(h[(std::size_t)i - 1], BigInt(p), f);
    if (!(h[(std::size_t)m] == h[0])) return false;
    // for each prime divisor l of m, gcd(x^(p^(m/l)) - x, f) must be trivial
    std::vector<int> prime_divs;
    int mm = m;
    for (int l = 2; l * l <= mm; ++l)
        if (mm % l == 0) {
            prime_divs.push_back(l);
            while (mm % l == 0) mm /= l;
        }
    if (mm > 1) prime_divs.push_back(mm);
    for (int l : prime_divs) {
        auto g = uni_gcd(h[(std::size_t)(m / l)] - x, f);
        if (g.deg() != 0) return false;
    }
    return true;
}

}  // namespace detail

/// Squarefree decomposition in characteristic p: returns pairwise coprime
/// squarefree factors g_i with multiplicities e_i so that the monic part of f
/// equals the product of g_i^e_i.
template <class K>
std::vector<std::pair<UniPoly<K>, int>> squarefree_decomposition(UniPoly<K> f, std::uint32_t p) {
    std::vector<std::pair<UniPoly<K>, int>> out;
    if (f.deg() < 1) return out;
    f = uni_monic(f);
    auto fp_ = uni_diff(f);
    if (fp_.is_zero()) {
        // f = u(x^p); recurse on the p-th root with multiplicities scaled by p
        auto u = uni_pth_root(f, p);
        for (auto& [g, e] : squarefree_decomposition(u, p)) out.emplace_back(g, e * (int)p);
        return out;
    }
    auto c = uni_gcd(f, fp_);
    auto w = uni_divmod(f, c).first;
    int i = 1;
    while (w.deg() > 0) {
        auto y = uni_gcd(w, c);
        auto z = uni_divmod(w, y).first;
        if (z.deg() > 0) out.emplace_back(uni_monic(z), i);
        w = y;
        c = uni_divmod(c, y).first;
        ++i;
    }
    if (c.deg() > 0) {
        auto u = uni_pth_root(c, p);
        for (auto& [g, e] : squarefree_decomposition(u, p)) {
            // merge with existing factors sharing support
            bool merged = false;
            for (auto& [g0, e0] : out)
                if (g0 == g) {
                    e0 += e * (int)p;
                    merged = true;
                    break;
                }
            if (!merged) out.emplace_back(g, e * (int)p);
        }
    }
    return out;
}

/// Product of the distinct irreducible factors of f, monic.
template <class K>
UniPoly<K> squarefree_part(const UniPoly<K>& f, std::uint32_t p) {
    auto dec = squarefree_decomposition(f, p);
    auto r = UniPoly<K>::one(f.dom);
    for (auto& [g, e] : dec) r = r * g;
    return r;
}

namespace detail {

/// Equal-degree splitting (Cantor-Zassenhaus) of a squarefree f all of whose
/// irreducible factors have degree d.  Deterministically seeded.  Works over
/// any odd-order finite coefficient domain exposing size() and element().
template <class K>
void fp_edf(const UniPoly<K>& f, int d, std::mt19937_64& rng, std::vector<UniPoly<K>>& out) {
    if (f.deg() == d) {
        out.push_back(uni_monic(f));
        return;
    }
    const std::uint64_t q = f.dom.size();
    BigInt e = (boost::multiprecision::pow(BigInt(q), (unsigned)d) - 1) / 2;
    while (true) {
        std::vector<typename K::Elem> rc;
        rc.reserve((std::size_t)f.deg());
        for (int i = 0; i < f.deg(); ++i) rc.push_back(f.dom.element(rng() % q));
        UniPoly<K> r(f.dom, std::move(rc));
        if (r.deg() < 1) continue;
        auto s = uni_powmod(r, e, f) - UniPoly<K>::one(f.dom);
        auto g = uni_gcd(s, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            fp_edf(g, d, rng, out);
            fp_edf(uni_divmod(f, g).first, d, rng, out);
            return;
        }
    }
}

}  // namespace detail

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by (degree, coefficient sequence).  The unit (leading coefficient
/// of f) is dropped.  Works over F_p and F_q alike.
template <class K>
std::vector<std::pair<UniPoly<K>, int>> factor_univariate(const UniPoly<K>& f) {
    if (f.deg() < 1) return {};
    const std::uint64_t q = f.dom.size();
    std::vector<std::pair<UniPoly<K>, int>> out;
    std::mt19937_64 rng(0x5bd1e995u);  // fixed seed: deterministic output
    for (auto& [sf, mult] : squarefree_decomposition(f, f.dom.p)) {
        // distinct-degree stage
        UniPoly<K> g = sf;
        UniPoly<K> x = UniPoly<K>::xpow(f.dom, 1);
        UniPoly<K> h = uni_mod(x, g);
        for (int d = 1; g.deg() > 0 && 2 * d <= g.deg(); ++d) {
            h = uni_powmod(h, BigInt(q), g);
            auto gd = uni_gcd(h - x, g);
            if (gd.deg() > 0) {
                std::vector<UniPoly<K>> irr;
                detail::fp_edf(gd, d, rng, irr);
                for (auto& qq : irr) out.emplace_back(qq, mult);
                g = uni_divmod(g, gd).first;
                h = uni_mod(h, g);
            }
        }
        if (g.deg() > 0) out.emplace_back(uni_monic(g), mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
        for (int i = a.first.deg(); i >= 0; --i)
            if (a.first.coeff(i) != b.first.coeff(i)) return a.first.coeff(i) < b.first.coeff(i);
        return a.second < b.second;
    });
    return out;
}

/// Distinct roots of f in K, in field enumeration order.  Works over F_p and
/// F_q via gcd with x^q - x followed by deterministic-seeded splitting.
template <class K>
std::vector<typename K::Elem> poly_roots(const UniPoly<K>& f) {
    std::vector<typename K::Elem> roots;
    if (f.deg() < 1) return roots;
    const K dom = f.dom;
    const std::uint64_t q = dom.size();
    auto x = UniPoly<K>::xpow(dom, 1);
    auto xq = uni_powmod(x, BigInt(q), uni_monic(f));
    auto h = uni_gcd(xq - x, f);  // product of (x - root) over distinct roots
    std::mt19937_64 rng(0xc2b2ae35u);
    std::vector<UniPoly<K>> stack{h};
    while (!stack.empty()) {
        auto g = stack.back();
        stack.pop_back();
        if (g.deg() <= 0) continue;
        if (g.deg() == 1) {
            roots.push_back(dom.neg(g.coeff(0)));  // monic x + c0
            continue;
        }
        // split with gcd((x + a)^((q-1)/2) - 1, g) for random a
        while (true) {
            auto a = dom.element(rng() % q);
            auto shifted = x + UniPoly<K>::constant(dom, a);
            auto s = uni_powmod(shifted, BigInt((q - 1) / 2), g) - UniPoly<K>::one(dom);
            auto t = uni_gcd(s, g);
            if (t.deg() > 0 && t.deg() < g.deg()) {
                stack.push_back(t);
                stack.push_back(uni_divmod(g, t).first);
                break;
            }
        }
    }
    std::sort(roots.begin(), roots.end(),
              [&](const auto& a, const auto& b) { return dom.index_of(a) < dom.index_of(b); });
    return roots;
}

// ---------------------------------------------------------------------------
// Bridges between multivariate and univariate representations.
// ---------------------------------------------------------------------------

template <class D>
UniPoly<D> to_unipoly(const MultiPoly<D>& f) {
    if (f.nvars != 1) throw AssertionError("to_unipoly wants one variable");
    std::vector<typename D::Elem> c((std::size_t)(f.degree() + 1), f.dom.zero());
    for (const auto& [m, coef] : f.terms) c[(std::size_t)m[0]] = coef;
    return UniPoly<D>(f.dom, std::move(c));
}

template <class D>
MultiPoly<D> from_unipoly(const UniPoly<D>& f) {
    MultiPoly<D> r(f.dom, 1);
    for (int i = 0; i <= f.deg(); ++i)
        if (!f.dom.is_zero(f.coeff(i))) r.add_term(Mono{(std::uint16_t)i}, f.coeff(i));
    return r;
}

/// Evaluate a multivariate polynomial at a point, coefficients and point in
/// the same domain.
template <class D>
typename D::Elem poly_eval(const MultiPoly<D>& f, const std::vector<typename D::Elem>& pt) {
    if ((int)pt.size() != f.nvars) throw AssertionError("evaluation point arity mismatch");
    auto r = f.dom.zero();
    for (const auto& [m, c] : f.terms) {
        auto t = c;
        for (int i = 0; i < f.nvars; ++i)
            if (m[(std::size_t)i]) t = f.dom.mul(t, f.dom.pow(pt[(std::size_t)i], m[(std::size_t)i]));
        r = f.dom.add(r, t);
    }
    return r;
}

/// Coefficientwise embedding of an F_p polynomial into F_q.
inline MultiPoly<FqDom> embed_poly(const MultiPoly<FpDom>& f, const FqDom& K) {
    if (K.p != f.dom.p) throw DomainMismatchError("embedding into an extension of a different prime");
    return map_coeffs(f, K, [&](FpDom::Elem c) { return K.embed(c); });
}

inline UniPoly<FqDom> embed_unipoly(const UniPoly<FpDom>& f, const FqDom& K) {
    if (K.p != f.dom.p) throw DomainMismatchError("embedding into an extension of a different prime");
    std::vector<FqDom::Elem> c;
    c.reserve(f.c.size());
    for (auto x : f.c) c.push_back(K.embed(x));
    return UniPoly<FqDom>(K, std::move(c));
}

}  // namespace pweyl
