#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pweyl/error.hpp"
#include "pweyl/fq.hpp"
#include "pweyl/poly.hpp"

namespace pweyl {

// ---------------------------------------------------------------------------
// Bivariate polynomials over a finite field as dense vectors in the second
// variable s with univariate coefficients in the first variable X.  Used to
// decompose support ideals into irreducible curve components: monomial and
// content splits first, then evaluation at X = a, univariate factorization,
// Hensel lifting in powers of (X - a) and factor recombination by trial
// division.  When no evaluation point in F_p keeps the specialization
// squarefree, points are drawn from small extensions F_q and the resulting
// factors are merged along Frobenius orbits back down to F_p.
// ---------------------------------------------------------------------------

template <class K>
struct SXPolyT {
    K dom;
    std::vector<UniPoly<K>> c;  // c[i] is the coefficient of s^i

    SXPolyT() = default;
    explicit SXPolyT(K d) : dom(d) {}
    SXPolyT(K d, std::vector<UniPoly<K>> cc) : dom(d), c(std::move(cc)) { normalize(); }

    void normalize() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    int deg_s() const { return (int)c.size() - 1; }
    int deg_x() const {
        int d = -1;
        for (const auto& f : c) d = std::max(d, f.deg());
        return d;
    }
    bool is_zero() const { return c.empty(); }
    const UniPoly<K>& lead() const {
        if (is_zero()) throw AssertionError("lead of zero polynomial");
        return c.back();
    }
    UniPoly<K> coeff(int i) const {
        return i >= 0 && i < (int)c.size() ? c[(std::size_t)i] : UniPoly<K>::zero(dom);
    }
    bool operator==(const SXPolyT& o) const { return c == o.c; }
};

using SXPoly = SXPolyT<FpDom>;
using XPoly = UniPoly<FpDom>;

template <class K>
SXPolyT<K> sx_zero(K d) { return SXPolyT<K>(d); }

template <class K>
SXPolyT<K> sx_add(const SXPolyT<K>& a, const SXPolyT<K>& b) {
    std::vector<UniPoly<K>> v(std::max(a.c.size(), b.c.size()), UniPoly<K>::zero(a.dom));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff((int)i) + b.coeff((int)i);
    return SXPolyT<K>(a.dom, std::move(v));
}

template <class K>
SXPolyT<K> sx_sub(const SXPolyT<K>& a, const SXPolyT<K>& b) {
    std::vector<UniPoly<K>> v(std::max(a.c.size(), b.c.size()), UniPoly<K>::zero(a.dom));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff((int)i) - b.coeff((int)i);
    return SXPolyT<K>(a.dom, std::move(v));
}

template <class K>
SXPolyT<K> sx_mul(const SXPolyT<K>& a, const SXPolyT<K>& b) {
    if (a.is_zero() || b.is_zero()) return sx_zero(a.dom);
    std::vector<UniPoly<K>> v(a.c.size() + b.c.size() - 1, UniPoly<K>::zero(a.dom));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) v[i + j] = v[i + j] + a.c[i] * b.c[j];
    return SXPolyT<K>(a.dom, std::move(v));
}

template <class K>
SXPolyT<K> sx_scale(const UniPoly<K>& f, const SXPolyT<K>& a) {
    std::vector<UniPoly<K>> v;
    v.reserve(a.c.size());
    for (const auto& g : a.c) v.push_back(f * g);
    return SXPolyT<K>(a.dom, std::move(v));
}

template <class K>
SXPolyT<K> sx_diff_s(const SXPolyT<K>& a) {
    if (a.deg_s() <= 0) return sx_zero(a.dom);
    std::vector<UniPoly<K>> v;
    for (int i = 1; i <= a.deg_s(); ++i)
        v.push_back(uni_scal(a.dom.from_int(i), a.c[(std::size_t)i]));
    return SXPolyT<K>(a.dom, std::move(v));
}

template <class K>
SXPolyT<K> sx_diff_x(const SXPolyT<K>& a) {
    std::vector<UniPoly<K>> v;
    for (const auto& f : a.c) v.push_back(uni_diff(f));
    return SXPolyT<K>(a.dom, std::move(v));
}

/// gcd of all X-coefficients: the content with respect to s.
template <class K>
UniPoly<K> sx_content(const SXPolyT<K>& a) {
    auto g = UniPoly<K>::zero(a.dom);
    for (const auto& f : a.c) g = uni_gcd(g, f);
    return g;
}

template <class K>
std::optional<UniPoly<K>> uni_divexact(const UniPoly<K>& a, const UniPoly<K>& b) {
    if (a.is_zero()) return UniPoly<K>::zero(a.dom);
    auto [q, r] = uni_divmod(a, b);
    if (!r.is_zero()) return std::nullopt;
    return q;
}

/// Divide every coefficient by g exactly.
template <class K>
SXPolyT<K> sx_divexact_content(const SXPolyT<K>& a, const UniPoly<K>& g) {
    std::vector<UniPoly<K>> v;
    for (const auto& f : a.c) {
        auto q = uni_divexact(f, g);
        if (!q) throw AssertionError("content division is not exact");
        v.push_back(*q);
    }
    return SXPolyT<K>(a.dom, std::move(v));
}

/// Exact division in K[X][s]; nullopt when b does not divide a.
template <class K>
std::optional<SXPolyT<K>> sx_divexact(const SXPolyT<K>& a, const SXPolyT<K>& b) {
    if (b.is_zero()) throw AssertionError("division by zero");
    if (a.is_zero()) return sx_zero(a.dom);
    SXPolyT<K> r = a;
    std::vector<UniPoly<K>> q((std::size_t)std::max(0, a.deg_s() - b.deg_s() + 1),
                              UniPoly<K>::zero(a.dom));
    while (!r.is_zero() && r.deg_s() >= b.deg_s()) {
        auto qc = uni_divexact(r.lead(), b.lead());
        if (!qc) return std::nullopt;
        int shift = r.deg_s() - b.deg_s();
        q[(std::size_t)shift] = *qc;
        // r -= qc * s^shift * b
        std::vector<UniPoly<K>> t((std::size_t)shift, UniPoly<K>::zero(a.dom));
        for (const auto& bc : b.c) t.push_back(*qc * bc);
        r = sx_sub(r, SXPolyT<K>(a.dom, std::move(t)));
        if (!r.is_zero() && r.deg_s() >= shift + b.deg_s()) return std::nullopt;  // no progress
    }
    if (!r.is_zero()) return std::nullopt;
    return SXPolyT<K>(a.dom, std::move(q));
}

/// Primitive-PRS gcd in s over K[X] (content handled separately).
template <class K>
SXPolyT<K> sx_gcd(SXPolyT<K> a, SXPolyT<K> b) {
    auto strip = [&](SXPolyT<K> f) {
        if (f.is_zero()) return f;
        auto ct = sx_content(f);
        return sx_divexact_content(f, ct);
    };
    a = strip(a);
    b = strip(b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.deg_s() < b.deg_s()) std::swap(a, b);
    while (!b.is_zero()) {
        if (b.deg_s() == 0) {
            // b is a nonzero content-free constant in s: gcd is 1
            return SXPolyT<K>(a.dom, {UniPoly<K>::one(a.dom)});
        }
        // pseudo-remainder: lead(b)^(delta+1) * a mod b
        int delta = a.deg_s() - b.deg_s();
        SXPolyT<K> r = a;
        for (int step = 0; step <= delta; ++step) {
            if (r.is_zero() || r.deg_s() < b.deg_s()) break;
            int shift = r.deg_s() - b.deg_s();
            UniPoly<K> rl = r.lead();
            r = sx_scale(b.lead(), r);
            std::vector<UniPoly<K>> t((std::size_t)shift, UniPoly<K>::zero(a.dom));
            for (const auto& bc : b.c) t.push_back(rl * bc);
            r = sx_sub(r, SXPolyT<K>(a.dom, std::move(t)));
        }
        if (!r.is_zero() && r.deg_s() >= b.deg_s())
            throw AssertionError("pseudo-division failed to reduce the degree");
        a = std::move(b);
        b = strip(std::move(r));
    }
    // normalize: monic leading X-coefficient
    if (!a.is_zero()) a = sx_scale(UniPoly<K>::constant(a.dom, a.dom.inv(a.lead().lead())), a);
    return a;
}

// conversions with the two-variable MultiPoly (variable 0 = X, variable 1 = s;
// pass swap=true to use variable 1 as X and variable 0 as s)
template <class K>
SXPolyT<K> sx_from_multipoly(const MultiPoly<K>& f, bool swap = false) {
    if (f.nvars != 2) throw AssertionError("expected a polynomial in two variables");
    SXPolyT<K> r(f.dom);
    for (const auto& [m, coef] : f.terms) {
        int xe = swap ? m[1] : m[0];
        int se = swap ? m[0] : m[1];
        if ((int)r.c.size() <= se) r.c.resize((std::size_t)se + 1, UniPoly<K>::zero(f.dom));
        auto& row = r.c[(std::size_t)se];
        if (row.deg() < xe) row.c.resize((std::size_t)xe + 1, f.dom.zero());
        row.c[(std::size_t)xe] = coef;
    }
    for (auto& g : r.c) g.normalize();
    r.normalize();
    return r;
}

template <class K>
MultiPoly<K> sx_to_multipoly(const SXPolyT<K>& f, bool swap = false) {
    MultiPoly<K> r(f.dom, 2);
    for (int i = 0; i <= f.deg_s(); ++i)
        for (int j = 0; j <= f.c[(std::size_t)i].deg(); ++j) {
            auto coef = f.c[(std::size_t)i].coeff(j);
            if (f.dom.is_zero(coef)) continue;
            Mono m(2, 0);
            m[swap ? 1 : 0] = (std::uint16_t)j;
            m[swap ? 0 : 1] = (std::uint16_t)i;
            r.add_term(m, coef);
        }
    return r;
}

/// Substitute X -> X + a in every coefficient.
template <class K>
SXPolyT<K> sx_shift_x(const SXPolyT<K>& f, typename K::Elem a) {
    auto shift_uni = [&](const UniPoly<K>& g) {
        // Horner in (X + a)
        auto r = UniPoly<K>::zero(f.dom);
        UniPoly<K> xa(f.dom, {a, f.dom.one()});
        for (int i = g.deg(); i >= 0; --i) r = r * xa + UniPoly<K>::constant(f.dom, g.coeff(i));
        return r;
    };
    std::vector<UniPoly<K>> v;
    for (const auto& g : f.c) v.push_back(shift_uni(g));
    return SXPolyT<K>(f.dom, std::move(v));
}

/// Evaluate the X variable, leaving a univariate polynomial in s.
template <class K>
UniPoly<K> sx_eval_x(const SXPolyT<K>& f, typename K::Elem a) {
    std::vector<typename K::Elem> v;
    v.reserve(f.c.size());
    for (const auto& g : f.c) v.push_back(g.eval(a));
    return UniPoly<K>(f.dom, std::move(v));
}

namespace detail {

template <class K>
SXPolyT<K> sx_truncate_x(const SXPolyT<K>& f, int L) {
    std::vector<UniPoly<K>> v;
    for (const auto& g : f.c) {
        std::vector<typename K::Elem> cc(
            g.c.begin(), g.c.begin() + (std::ptrdiff_t)std::min<std::size_t>(g.c.size(), (std::size_t)L));
        v.emplace_back(f.dom, std::move(cc));
    }
    return SXPolyT<K>(f.dom, std::move(v));
}

/// Two-factor linear Hensel lift: given W monic in s and a coprime monic
/// factorization W = F0 * G0 mod X, produce (F, G) monic with W = F * G
/// mod X^L and F = F0, G = G0 mod X.
template <class K>
std::pair<SXPolyT<K>, SXPolyT<K>> hensel_pair(const SXPolyT<K>& W, const UniPoly<K>& F0,
                                              const UniPoly<K>& G0, int L) {
    const K dom = W.dom;
    // Bezout: sigma*F0 + tau*G0 = 1 over K[s]
    auto s0 = UniPoly<K>::zero(dom), s1 = UniPoly<K>::one(dom);
    auto t0 = UniPoly<K>::one(dom), t1 = UniPoly<K>::zero(dom);
    auto r0 = G0, r1 = F0;
    while (!r1.is_zero()) {
        auto [q, r] = uni_divmod(r0, r1);
        r0 = r1; r1 = r;
        auto ns = s0 - q * s1; s0 = s1; s1 = ns;
        auto nt = t0 - q * t1; t0 = t1; t1 = nt;
    }
    if (r0.deg() != 0) throw AssertionError("hensel factors are not coprime");
    auto unit = dom.inv(r0.coeff(0));
    auto sigma = uni_scal(unit, s0);  // sigma*F0 + tau*G0 = 1
    auto tau = uni_scal(unit, t0);
    if (!(sigma * F0 + tau * G0 == UniPoly<K>::one(dom)))
        throw AssertionError("bezout identity failed");

    auto lift_of_uni = [&](const UniPoly<K>& u) {
        std::vector<UniPoly<K>> v;
        for (int i = 0; i <= u.deg(); ++i) v.push_back(UniPoly<K>::constant(dom, u.coeff(i)));
        return SXPolyT<K>(dom, std::move(v));
    };
    SXPolyT<K> F = lift_of_uni(F0), G = lift_of_uni(G0);
    for (int j = 1; j < L; ++j) {
        SXPolyT<K> E = sx_sub(W, sx_mul(F, G));
        E = sx_truncate_x(E, L);
        // univariate coefficient of X^j in E
        std::vector<typename K::Elem> ev;
        ev.reserve(E.c.size());
        for (const auto& g : E.c) ev.push_back(g.coeff(j));
        UniPoly<K> ej(dom, std::move(ev));
        if (ej.is_zero()) continue;
        auto dF = uni_mod(tau * ej, F0);
        auto num = ej - dF * G0;
        auto [dG, rem] = uni_divmod(num, F0);
        if (!rem.is_zero()) throw AssertionError("hensel update failed");
        // F += X^j dF, G += X^j dG
        auto bump = [&](SXPolyT<K>& T, const UniPoly<K>& d) {
            for (int i = 0; i <= d.deg(); ++i) {
                if (dom.is_zero(d.coeff(i))) continue;
                if ((int)T.c.size() <= i) T.c.resize((std::size_t)i + 1, UniPoly<K>::zero(dom));
                auto& cc = T.c[(std::size_t)i];
                if (cc.deg() < j) cc.c.resize((std::size_t)j + 1, dom.zero());
                cc.c[(std::size_t)j] = dom.add(cc.c[(std::size_t)j], d.coeff(i));
                cc.normalize();
            }
            T.normalize();
        };
        bump(F, dF);
        bump(G, dG);
    }
    return {F, G};
}

/// Lift a multi-factor coprime factorization of W mod X to mod X^L.
template <class K>
std::vector<SXPolyT<K>> hensel_multi(const SXPolyT<K>& W, const std::vector<UniPoly<K>>& facs,
                                     int L) {
    if (facs.size() == 1) return {sx_truncate_x(W, L)};
    std::size_t half = facs.size() / 2;
    auto F0 = UniPoly<K>::one(W.dom), G0 = UniPoly<K>::one(W.dom);
    for (std::size_t i = 0; i < half; ++i) F0 = F0 * facs[i];
    for (std::size_t i = half; i < facs.size(); ++i) G0 = G0 * facs[i];
    auto [F, G] = hensel_pair(W, F0, G0, L);
    std::vector<UniPoly<K>> left(facs.begin(), facs.begin() + (std::ptrdiff_t)half);
    std::vector<UniPoly<K>> right(facs.begin() + (std::ptrdiff_t)half, facs.end());
    auto lf = hensel_multi(F, left, L);
    auto rf = hensel_multi(G, right, L);
    lf.insert(lf.end(), rf.begin(), rf.end());
    return lf;
}

/// Canonical scaling: divide by the content and make the coefficient of the
/// highest (s-degree, then X-degree) term equal to one.
template <class K>
SXPolyT<K> sx_canonical(SXPolyT<K> f) {
    if (f.is_zero()) return f;
    auto ct = sx_content(f);
    if (ct.deg() > 0) f = sx_divexact_content(f, ct);
    auto u = f.dom.inv(f.lead().lead());
    return sx_scale(UniPoly<K>::constant(f.dom, u), f);
}

/// Factor a separable-in-s, squarefree, content-free polynomial with
/// deg_s >= 1 and deg_x >= 1 into irreducibles over K, by evaluation at
/// X = a, Hensel lifting and recombination.  Returns nullopt when no
/// evaluation point in K works.
template <class K>
std::optional<std::vector<SXPolyT<K>>> separable_core(const SXPolyT<K>& v) {
    const K dom = v.dom;
    const int e = v.deg_s();
    std::optional<typename K::Elem> best_a;
    std::vector<UniPoly<K>> best_facs;
    for (std::uint64_t ai = 0; ai < dom.size(); ++ai) {
        auto a = dom.element(ai);
        if (dom.is_zero(v.lead().eval(a))) continue;
        auto ua = sx_eval_x(v, a);
        if (uni_gcd(ua, uni_diff(ua)).deg() != 0) continue;  // not squarefree here
        auto fac = factor_univariate(ua);
        std::vector<UniPoly<K>> fs;
        for (auto& [g, mult] : fac) {
            if (mult != 1) throw AssertionError("squarefree specialization factored with multiplicity");
            fs.push_back(g);
        }
        if (fs.size() == 1) return std::vector<SXPolyT<K>>{sx_canonical(v)};  // irreducible
        if (!best_a || fs.size() < best_facs.size()) {
            best_a = a;
            best_facs = std::move(fs);
        }
    }
    if (!best_a) return std::nullopt;

    // shift so the good point is X = 0, then monicize in s
    SXPolyT<K> vs = sx_shift_x(v, *best_a);
    UniPoly<K> ell = vs.lead();
    SXPolyT<K> W(dom);
    {
        // W = ell^(e-1) * vs(X, s/ell): coefficient of s^i becomes c_i * ell^(e-1-i);
        // the lead turns into ell * ell^(-1) = 1, so W is monic in s
        std::vector<UniPoly<K>> wc;
        for (int i = 0; i < e; ++i) {
            UniPoly<K> f = vs.coeff(i);
            for (int k = 0; k < e - 1 - i; ++k) f = f * ell;
            wc.push_back(f);
        }
        wc.push_back(UniPoly<K>::one(dom));
        W = SXPolyT<K>(dom, std::move(wc));
    }
    const int L = W.deg_x() + 1;
    auto W0 = sx_eval_x(W, dom.zero());
    auto w0fac = factor_univariate(W0);
    std::vector<UniPoly<K>> f0;
    for (auto& [g, mult] : w0fac) {
        if (mult != 1) throw AssertionError("monicized specialization is not squarefree");
        f0.push_back(g);
    }
    auto lifted = hensel_multi(sx_truncate_x(W, L), f0, L);

    // recombination by trial division against the original (shifted) vs
    std::vector<SXPolyT<K>> found;
    std::vector<int> alive((std::size_t)lifted.size(), 1);
    SXPolyT<K> rem = vs;
    int alive_count = (int)lifted.size();
    for (int size = 1; size <= alive_count && alive_count > 0; ++size) {
        bool progress = true;
        while (progress && alive_count > 0) {
            progress = false;
            std::vector<int> idx;
            for (int i = 0; i < (int)lifted.size(); ++i)
                if (alive[(std::size_t)i]) idx.push_back(i);
            if ((int)idx.size() < size) break;
            std::vector<int> pick((std::size_t)size);
            std::function<bool(int, int)> try_subsets = [&](int pos, int from) -> bool {
                if (pos == size) {
                    SXPolyT<K> cand(dom, {UniPoly<K>::one(dom)});
                    for (int t = 0; t < size; ++t)
                        cand = sx_truncate_x(sx_mul(cand, lifted[(std::size_t)pick[(std::size_t)t]]), L);
                    // un-monicize: candidate factor of vs is the canonical form
                    // of cand with s scaled back by ell
                    SXPolyT<K> scaled(dom);
                    {
                        std::vector<UniPoly<K>> sc;
                        int d = cand.deg_s();
                        for (int i = 0; i <= d; ++i) {
                            UniPoly<K> f = cand.coeff(i);
                            for (int k = 0; k < i; ++k) f = f * ell;  // ell^i
                            sc.push_back(f);
                        }
                        scaled = SXPolyT<K>(dom, std::move(sc));
                    }
                    scaled = sx_canonical(scaled);
                    auto q = sx_divexact(rem, scaled);
                    if (q) {
                        found.push_back(scaled);
                        rem = sx_canonical(*q);
                        for (int t = 0; t < size; ++t) alive[(std::size_t)pick[(std::size_t)t]] = 0;
                        alive_count -= size;
                        return true;
                    }
                    return false;
                }
                for (int i = from; i < (int)idx.size(); ++i) {
                    pick[(std::size_t)pos] = idx[(std::size_t)i];
                    if (try_subsets(pos + 1, i + 1)) return true;
                }
                return false;
            };
            if (try_subsets(0, 0)) progress = true;
        }
    }
    if (rem.deg_s() > 0) found.push_back(sx_canonical(rem));

    // verify and shift back
    SXPolyT<K> prod(dom, {UniPoly<K>::one(dom)});
    for (auto& f : found) prod = sx_mul(prod, f);
    if (!(sx_canonical(prod) == sx_canonical(vs))) return std::nullopt;
    std::vector<SXPolyT<K>> out;
    for (auto& f : found) out.push_back(sx_canonical(sx_shift_x(f, dom.neg(*best_a))));
    return out;
}

inline SXPolyT<FqDom> sx_embed(const SXPoly& f, const FqDom& K) {
    std::vector<UniPoly<FqDom>> v;
    v.reserve(f.c.size());
    for (const auto& g : f.c) v.push_back(embed_unipoly(g, K));
    return SXPolyT<FqDom>(K, std::move(v));
}

/// Coefficientwise Frobenius c -> c^p.
inline SXPolyT<FqDom> sx_frobenius(const SXPolyT<FqDom>& f) {
    std::vector<UniPoly<FqDom>> v;
    for (const auto& g : f.c) {
        std::vector<FqDom::Elem> cc;
        cc.reserve(g.c.size());
        for (const auto& x : g.c) cc.push_back(f.dom.pow(x, f.dom.p));
        v.emplace_back(f.dom, std::move(cc));
    }
    return SXPolyT<FqDom>(f.dom, std::move(v));
}

/// Read an F_q polynomial whose coefficients all lie in the prime field back
/// down to F_p; nullopt if some coefficient does not.
inline std::optional<SXPoly> sx_descend(const SXPolyT<FqDom>& f, FpDom base) {
    std::vector<XPoly> v;
    for (const auto& g : f.c) {
        std::vector<FpDom::Elem> cc;
        for (const auto& x : g.c) {
            for (std::size_t i = 1; i < x.size(); ++i)
                if (x[i] != 0) return std::nullopt;
            cc.push_back(x.empty() ? 0 : x[0]);
        }
        v.emplace_back(base, std::move(cc));
    }
    return SXPoly(base, std::move(v));
}

}  // namespace detail

/// Factor a separable (in s), squarefree, content-free bivariate polynomial
/// with deg_s >= 1 and deg_x >= 1 into irreducibles over F_p.  Evaluation
/// points are drawn from F_p first, then from F_{p^2} and F_{p^3} with the
/// factors merged along Frobenius orbits.  Returns nullopt only when every
/// candidate point degenerates.
inline std::optional<std::vector<SXPoly>> sx_factor_separable(const SXPoly& v) {
    if (auto r = detail::separable_core(v)) return r;
    for (int m = 2; m <= 3; ++m) {
        FqDom K(v.dom.p, m);
        auto ve = detail::sx_embed(v, K);
        auto r = detail::separable_core(ve);
        if (!r) continue;
        // merge Frobenius orbits: each orbit product has prime-field
        // coefficients and is an irreducible factor over F_p
        std::vector<SXPolyT<FqDom>> pool = *r;
        std::vector<int> used(pool.size(), 0);
        std::vector<SXPoly> out;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (used[i]) continue;
            SXPolyT<FqDom> prod = pool[i];
            used[i] = 1;
            auto cur = detail::sx_frobenius(pool[i]);
            cur = detail::sx_canonical(cur);
            while (!(cur == pool[i])) {
                bool hit = false;
                for (std::size_t j = 0; j < pool.size(); ++j) {
                    if (used[j] || !(pool[j] == cur)) continue;
                    prod = sx_mul(prod, pool[j]);
                    used[j] = 1;
                    hit = true;
                    break;
                }
                if (!hit) throw AssertionError("frobenius conjugate missing from factor list");
                cur = detail::sx_canonical(detail::sx_frobenius(cur));
            }
            auto down = detail::sx_descend(detail::sx_canonical(prod), v.dom);
            if (!down) throw AssertionError("frobenius orbit product did not descend");
            out.push_back(detail::sx_canonical(*down));
        }
        return out;
    }
    return std::nullopt;
}

/// One irreducible factor of the support eliminant, as a polynomial in the
/// center coordinates (variable 0, variable 1) of the ambient two-variable
/// ring used by the caller.
struct BiFactor {
    MultiPoly<FpDom> poly;
    bool irreducible_certified = true;
};

struct BiFactorization {
    std::vector<BiFactor> factors;  // distinct, canonical scaling, no multiplicities
    bool complete = true;           // false if some factor may still split
};

/// Distinct irreducible factors of a two-variable polynomial over F_p
/// (multiplicities are dropped: callers work with radicals).  Sets
/// complete = false on the rare inputs where no usable evaluation point
/// exists even in small extensions; the unsplit part is then reported as
/// one factor.
inline BiFactorization factor_bivariate_squarefree(const MultiPoly<FpDom>& g0) {
    const FpDom dom = g0.dom;
    BiFactorization out;
    if (g0.is_zero()) throw AssertionError("cannot factor the zero polynomial");
    if (g0.is_constant()) return out;

    auto push_unique = [&](MultiPoly<FpDom> f, bool certified) {
        for (auto& h : out.factors)
            if (h.poly == f) return;
        out.factors.push_back(BiFactor{std::move(f), certified});
    };

    // monomial part
    MultiPoly<FpDom> g = g0;
    {
        std::uint16_t minx = 0xffff, mins = 0xffff;
        for (const auto& [m, c] : g.terms) {
            minx = std::min(minx, m[0]);
            mins = std::min(mins, m[1]);
        }
        if (minx > 0 || mins > 0) {
            MultiPoly<FpDom> shifted(dom, 2);
            for (const auto& [m, c] : g.terms)
                shifted.add_term(Mono{(std::uint16_t)(m[0] - minx), (std::uint16_t)(m[1] - mins)}, c);
            g = shifted;
            if (minx > 0) push_unique(MultiPoly<FpDom>::variable(dom, 2, 0), true);
            if (mins > 0) push_unique(MultiPoly<FpDom>::variable(dom, 2, 1), true);
        }
    }
    if (g.is_constant()) return out;

    // recursive worker on SXPoly; factors of the content in X split off first
    std::function<void(SXPoly, bool)> work = [&](SXPoly h, bool swapped) {
        if (h.is_zero()) throw AssertionError("zero slipped into the factor worker");
        if (h.deg_s() == 0) {
            // univariate in X
            for (auto& [q, mult] : factor_univariate(h.c[0]))
                push_unique(sx_to_multipoly(SXPoly(dom, {q}), swapped), true);
            return;
        }
        auto ct = sx_content(h);
        if (ct.deg() > 0) {
            for (auto& [q, mult] : factor_univariate(ct))
                push_unique(sx_to_multipoly(SXPoly(dom, {q}), swapped), true);
            h = sx_divexact_content(h, ct);
        }
        h = detail::sx_canonical(h);
        if (h.deg_s() == 0) return;
        if (h.deg_x() <= 0) {
            // univariate in s
            std::vector<FpDom::Elem> uc;
            for (const auto& f : h.c) uc.push_back(f.coeff(0));
            UniPoly<FpDom> us(dom, std::move(uc));
            for (auto& [q, mult] : factor_univariate(us)) {
                std::vector<XPoly> qc;
                for (int i = 0; i <= q.deg(); ++i) qc.push_back(XPoly::constant(dom, q.coeff(i)));
                push_unique(sx_to_multipoly(SXPoly(dom, std::move(qc)), swapped), true);
            }
            return;
        }
        auto ds = sx_diff_s(h);
        if (ds.is_zero()) {
            auto dx = sx_diff_x(h);
            if (!dx.is_zero()) {
                // inseparable in s but separable in X: swap the roles
                work(sx_from_multipoly(sx_to_multipoly(h, swapped), !swapped), !swapped);
                return;
            }
            // h = w(X^p, s^p) is an exact p-th power: divide exponents by p
            auto hm = sx_to_multipoly(h, swapped);
            MultiPoly<FpDom> root(dom, 2);
            const std::uint32_t p = dom.p;
            for (const auto& [m, c] : hm.terms) {
                if (m[0] % p || m[1] % p) throw AssertionError("inseparable factor is not a p-th power");
                root.add_term(Mono{(std::uint16_t)(m[0] / p), (std::uint16_t)(m[1] / p)}, c);
            }
            work(sx_from_multipoly(root, swapped), swapped);
            return;
        }
        auto u = sx_gcd(h, ds);
        if (u.deg_s() > 0 || u.deg_x() > 0) {
            auto sep = sx_divexact(h, u);
            if (!sep) throw AssertionError("squarefree split division failed");
            work(*sep, swapped);
            work(u, swapped);
            return;
        }
        // h is squarefree and separable in s: factor it
        auto facs = sx_factor_separable(h);
        if (!facs) {
            out.complete = false;
            push_unique(sx_to_multipoly(detail::sx_canonical(h), swapped), false);
            return;
        }
        for (auto& f : *facs) push_unique(sx_to_multipoly(f, swapped), true);
    };

    work(sx_from_multipoly(g, false), false);

    // canonical order: by total degree, then term count, then string compare
    std::sort(out.factors.begin(), out.factors.end(), [&](const BiFactor& a, const BiFactor& b) {
        if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
        auto sa = poly_to_string(a.poly, {"u", "v"});
        auto sb = poly_to_string(b.poly, {"u", "v"});
        if (sa.size() != sb.size()) return sa.size() < sb.size();
        return sa < sb;
    });
    return out;
}

}  // namespace pweyl
