#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "pweyl/error.hpp"
#include "pweyl/monomial.hpp"
#include "pweyl/parse.hpp"
#include "pweyl/poly.hpp"

namespace pweyl {

/// Element of the Weyl algebra A_n in normal-ordered form: the key of a term
/// is the exponent vector (a_1..a_n, b_1..b_n) of x^a d^b, x's to the left.
/// The defining relations are [d_i, x_j] = delta_ij, everything else commutes.
template <class D>
struct WeylElement {
    using Elem = typename D::Elem;

    D dom;
    int n = 0;
    std::map<Mono, Elem> terms;

    WeylElement() = default;
    WeylElement(D d, int vars) : dom(d), n(vars) {}

    static WeylElement zero(D d, int n) { return WeylElement(d, n); }
    static WeylElement scalar(D d, int n, Elem c) {
        WeylElement w(d, n);
        if (!d.is_zero(c)) w.terms.emplace(mono_one(2 * n), c);
        return w;
    }
    static WeylElement one(D d, int n) { return scalar(d, n, d.one()); }
    static WeylElement x(D d, int n, int i) {
        WeylElement w(d, n);
        Mono m = mono_one(2 * n);
        m[(std::size_t)i] = 1;
        w.terms.emplace(std::move(m), d.one());
        return w;
    }
    static WeylElement dx(D d, int n, int i) {
        WeylElement w(d, n);
        Mono m = mono_one(2 * n);
        m[(std::size_t)(n + i)] = 1;
        w.terms.emplace(std::move(m), d.one());
        return w;
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

    bool is_zero() const { return terms.empty(); }

    /// Total degree in x and d jointly (-1 for zero).
    std::int64_t degree() const {
        std::int64_t d = -1;
        for (auto& [m, c] : terms) d = std::max<std::int64_t>(d, total_degree(m));
        return d;
    }

    /// Highest d-degree (order as a differential operator; -1 for zero).
    std::int64_t order() const {
        std::int64_t d = -1;
        for (auto& [m, c] : terms) {
            std::uint32_t o = 0;
            for (int i = n; i < 2 * n; ++i) o += m[(std::size_t)i];
            d = std::max<std::int64_t>(d, o);
        }
        return d;
    }

    bool operator==(const WeylElement& o) const {
        if (n != o.n || terms.size() != o.terms.size()) return false;
        auto it = terms.begin(), jt = o.terms.begin();
        for (; it != terms.end(); ++it, ++jt)
            if (it->first != jt->first || !dom.eq(it->second, jt->second)) return false;
        return true;
    }
    bool operator!=(const WeylElement& o) const { return !(*this == o); }
};

template <class D>
void check_compatible(const WeylElement<D>& a, const WeylElement<D>& b) {
    if (a.dom != b.dom || a.n != b.n) throw DomainMismatchError("Weyl elements from different algebras");
}

template <class D>
WeylElement<D> operator+(const WeylElement<D>& a, const WeylElement<D>& b) {
    check_compatible(a, b);
    WeylElement<D> r = a;
    for (auto& [m, c] : b.terms) r.add_term(m, c);
    return r;
}

template <class D>
WeylElement<D> operator-(const WeylElement<D>& a) {
    WeylElement<D> r(a.dom, a.n);
    for (auto& [m, c] : a.terms) r.terms.emplace(m, a.dom.neg(c));
    return r;
}

template <class D>
WeylElement<D> operator-(const WeylElement<D>& a, const WeylElement<D>& b) {
    check_compatible(a, b);
    WeylElement<D> r = a;
    for (auto& [m, c] : b.terms) r.add_term(m, b.dom.neg(c));
    return r;
}

template <class D>
WeylElement<D> weyl_scal_mul(const typename D::Elem& c, const WeylElement<D>& a) {
    WeylElement<D> r(a.dom, a.n);
    if (a.dom.is_zero(c)) return r;
    for (auto& [m, v] : a.terms) {
        auto w = a.dom.mul(c, v);
        if (!a.dom.is_zero(w)) r.terms.emplace(m, w);
    }
    return r;
}

namespace detail {

/// Lazily built rows of binomials and falling factorials in the coefficient
/// domain; one instance lives for the duration of a product.
template <class D>
struct CommTables {
    const D& dom;
    std::unordered_map<std::uint32_t, std::vector<typename D::Elem>> binrows, fallrows;

    explicit CommTables(const D& d) : dom(d) {}

    const std::vector<typename D::Elem>& binrow(std::uint32_t b) {
        auto it = binrows.find(b);
        if (it != binrows.end()) return it->second;
        std::vector<typename D::Elem> row((std::size_t)b + 1);
        row[0] = dom.one();
        for (std::uint32_t k = 1; k <= b; ++k) row[k] = dom.binom(b, k);
        return binrows.emplace(b, std::move(row)).first->second;
    }

    const std::vector<typename D::Elem>& fallrow(std::uint32_t c) {
        auto it = fallrows.find(c);
        if (it != fallrows.end()) return it->second;
        std::vector<typename D::Elem> row((std::size_t)c + 1);
        row[0] = dom.one();
        for (std::uint32_t k = 1; k <= c; ++k)
            row[k] = dom.mul(row[k - 1], dom.from_int((std::int64_t)(c - k + 1)));
        return fallrows.emplace(c, std::move(row)).first->second;
    }
};

}  // namespace detail

/// Normal-ordered product.  Per coordinate,
///   (x^a d^b)(x^c d^d) = sum_k C(b,k) c!/(c-k)! x^(a+c-k) d^(b+d-k),
/// different coordinates commuting independently.
template <class D>
WeylElement<D> operator*(const WeylElement<D>& lhs, const WeylElement<D>& rhs) {
    check_compatible(lhs, rhs);
    const D& dom = lhs.dom;
    const int n = lhs.n;
    WeylElement<D> out(dom, n);
    if (lhs.is_zero() || rhs.is_zero()) return out;
    detail::CommTables<D> tab(dom);

    std::unordered_map<Mono, typename D::Elem, MonoHash> acc;
    Mono key((std::size_t)(2 * n), 0);
    // recursion over coordinates: expands the commutator sum coordinate by coordinate
    auto emit = [&](const Mono& la, const Mono& ra, typename D::Elem coef) {
        struct Rec {
            const D& dom;
            detail::CommTables<D>& tab;
            const Mono& la;
            const Mono& ra;
            Mono& key;
            int n;
            std::unordered_map<Mono, typename D::Elem, MonoHash>& acc;
            void go(int i, typename D::Elem c) {
                if (i == n) {
                    auto it = acc.find(key);
                    if (it == acc.end()) acc.emplace(key, c);
                    else it->second = dom.add(it->second, c);
                    return;
                }
                std::uint32_t a = la[(std::size_t)i], b = la[(std::size_t)(n + i)];
                std::uint32_t cc = ra[(std::size_t)i], d = ra[(std::size_t)(n + i)];
                if (a + cc >= kMaxExponent || b + d >= kMaxExponent)
                    throw ExponentOverflowError("Weyl product exponent overflow");
                std::uint32_t kmax = b < cc ? b : cc;
                const auto& brow = tab.binrow(b);
                const auto& frow = tab.fallrow(cc);
                for (std::uint32_t k = 0; k <= kmax; ++k) {
                    auto f = dom.mul(brow[k], frow[k]);
                    if (dom.is_zero(f)) continue;
                    key[(std::size_t)i] = (std::uint16_t)(a + cc - k);
                    key[(std::size_t)(n + i)] = (std::uint16_t)(b + d - k);
                    go(i + 1, dom.mul(c, f));
                }
            }
        };
        Rec rec{dom, tab, la, ra, key, n, acc};
        rec.go(0, coef);
    };

    for (auto& [la, lc] : lhs.terms)
        for (auto& [ra, rc] : rhs.terms) emit(la, ra, dom.mul(lc, rc));

    for (auto& [m, c] : acc)
        if (!dom.is_zero(c)) out.terms.emplace(m, c);
    return out;
}

template <class D>
WeylElement<D> weyl_pow(const WeylElement<D>& a, std::uint32_t e) {
    if (e >= kMaxExponent) throw ExponentOverflowError("Weyl power exponent out of range");
    WeylElement<D> r = WeylElement<D>::one(a.dom, a.n);
    WeylElement<D> base = a;
    while (e) {
        if (e & 1) r = r * base;
        if (e >>= 1) base = base * base;
    }
    return r;
}

template <class D>
WeylElement<D> weyl_commutator(const WeylElement<D>& a, const WeylElement<D>& b) {
    return a * b - b * a;
}

/// Embed a coordinate polynomial (n variables) as a multiplication operator.
template <class D>
WeylElement<D> weyl_from_poly(const MultiPoly<D>& f) {
    WeylElement<D> w(f.dom, f.nvars);
    for (auto& [m, c] : f.terms) {
        Mono mm = m;
        mm.resize((std::size_t)(2 * f.nvars), 0);
        w.terms.emplace(std::move(mm), c);
    }
    return w;
}

/// Apply the operator to a polynomial: x^a d^b acts as multiplication after
/// b-fold differentiation.
template <class D>
MultiPoly<D> weyl_apply(const WeylElement<D>& w, const MultiPoly<D>& f) {
    if (w.dom != f.dom || w.n != f.nvars) throw DomainMismatchError("weyl_apply: ring mismatch");
    const D& dom = w.dom;
    MultiPoly<D> out(dom, f.nvars);
    detail::CommTables<D> tab(dom);
    for (auto& [wm, wc] : w.terms) {
        for (auto& [fm, fc] : f.terms) {
            auto c = dom.mul(wc, fc);
            Mono m((std::size_t)f.nvars, 0);
            bool dead = false;
            for (int i = 0; i < f.nvars && !dead; ++i) {
                std::uint32_t a = wm[(std::size_t)i], b = wm[(std::size_t)(f.nvars + i)];
                std::uint32_t e = fm[(std::size_t)i];
                if (b > e) { dead = true; break; }
                c = dom.mul(c, tab.fallrow(e)[b]);
                if (dom.is_zero(c)) { dead = true; break; }
                std::uint32_t r = a + e - b;
                if (r >= kMaxExponent) throw ExponentOverflowError("weyl_apply exponent overflow");
                m[(std::size_t)i] = (std::uint16_t)r;
            }
            if (!dead) out.add_term(m, c);
        }
    }
    return out;
}

/// Commutes with every x_i and d_i?
template <class D>
bool is_central(const WeylElement<D>& w) {
    for (int i = 0; i < w.n; ++i) {
        if (!weyl_commutator(w, WeylElement<D>::x(w.dom, w.n, i)).is_zero()) return false;
        if (!weyl_commutator(w, WeylElement<D>::dx(w.dom, w.n, i)).is_zero()) return false;
    }
    return true;
}

/// In characteristic p the center is F_p[x^p, d^p]; a normal-ordered element
/// is central exactly when every exponent is divisible by p.  Returns the
/// element's coordinates as a polynomial in X_1..X_n, s_1..s_n with
/// X_i = x_i^p, s_i = d_i^p.
inline MultiPoly<FpDom> center_coordinates(const WeylElement<FpDom>& w) {
    const std::uint32_t p = w.dom.p;
    MultiPoly<FpDom> out(w.dom, 2 * w.n);
    for (auto& [m, c] : w.terms) {
        Mono mm((std::size_t)(2 * w.n), 0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] % p != 0)
                throw NotCentralError("element is not central: exponent " + std::to_string(m[i]) +
                                      " not divisible by " + std::to_string(p));
            mm[i] = (std::uint16_t)(m[i] / p);
        }
        out.terms.emplace(std::move(mm), c);
    }
    return out;
}

/// The Fourier transform x_i -> d_i, d_i -> -x_i (an algebra automorphism).
template <class D>
WeylElement<D> fourier(const WeylElement<D>& w) {
    const D& dom = w.dom;
    WeylElement<D> out(dom, w.n);
    detail::CommTables<D> tab(dom);
    for (auto& [m, c] : w.terms) {
        // x^a d^b -> d^a (-x)^b; reorder d^a x^b with the commutation sum
        std::uint32_t bsum = 0;
        for (int i = 0; i < w.n; ++i) bsum += m[(std::size_t)(w.n + i)];
        auto coef = (bsum & 1) ? dom.neg(c) : c;
        WeylElement<D> t = WeylElement<D>::scalar(dom, w.n, coef);
        for (int i = 0; i < w.n; ++i) {
            std::uint32_t a = m[(std::size_t)i], b = m[(std::size_t)(w.n + i)];
            if (!a && !b) continue;
            WeylElement<D> piece(dom, w.n);
            std::uint32_t kmax = a < b ? a : b;
            for (std::uint32_t k = 0; k <= kmax; ++k) {
                auto f = dom.mul(tab.binrow(a)[k], tab.fallrow(b)[k]);
                if (dom.is_zero(f)) continue;
                Mono mm = mono_one(2 * w.n);
                mm[(std::size_t)i] = (std::uint16_t)(b - k);
                mm[(std::size_t)(w.n + i)] = (std::uint16_t)(a - k);
                piece.add_term(mm, f);
            }
            t = t * piece;
        }
        out = out + t;
    }
    return out;
}

/// Evaluate a coordinate polynomial at given (pairwise commuting) operator
/// images; used to transport polynomial formulas into the algebra.
template <class D>
WeylElement<D> weyl_eval_poly(const MultiPoly<D>& f, const std::vector<WeylElement<D>>& images,
                              bool check_commuting = true) {
    if ((int)images.size() != f.nvars) throw AssertionError("weyl_eval_poly: wrong image count");
    if (images.empty()) throw AssertionError("weyl_eval_poly: no images");
    const D& dom = images[0].dom;
    int n = images[0].n;
    if (check_commuting)
        for (std::size_t i = 0; i < images.size(); ++i)
            for (std::size_t j = i + 1; j < images.size(); ++j)
                if (!weyl_commutator(images[i], images[j]).is_zero())
                    throw AssertionError("weyl_eval_poly: images do not commute");
    WeylElement<D> out(dom, n);
    std::vector<std::vector<WeylElement<D>>> pows(images.size());
    for (auto& [m, c] : f.terms) {
        WeylElement<D> t = WeylElement<D>::scalar(dom, n, c);
        for (std::size_t i = 0; i < images.size(); ++i) {
            std::uint32_t e = m[i];
            if (!e) continue;
            auto& pv = pows[i];
            if (pv.empty()) pv.push_back(images[i]);
            while (pv.size() < e) pv.push_back(pv.back() * images[i]);
            t = t * pv[e - 1];
        }
        out = out + t;
    }
    return out;
}

/// Remainder of w modulo the left ideal D.L on the line (n = 1), for L monic
/// in d of order dord: repeatedly cancels the highest d-term.  The result has
/// d-order < dord.
template <class D>
WeylElement<D> weyl_reduce_left(const WeylElement<D>& w, const WeylElement<D>& L,
                                std::uint64_t budget = 1'000'000) {
    check_compatible(w, L);
    if (w.n != 1) throw AssertionError("weyl_reduce_left: only implemented on the line");
    std::int64_t dord = L.order();
    if (dord < 0) throw AssertionError("weyl_reduce_left: zero operator");
    // locate the coefficient of d^dord; monic means it is a nonzero constant
    typename D::Elem lead = L.dom.zero();
    for (auto& [m, c] : L.terms)
        if (m[1] == (std::uint16_t)dord) {
            if (m[0] != 0) throw NotMonicError("leading d-coefficient is not constant");
            lead = c;
        }
    if (L.dom.is_zero(lead)) throw NotMonicError("no constant leading d-coefficient");
    auto leadinv = L.dom.inv(lead);

    WeylElement<D> r = w;
    std::uint64_t steps = 0;
    for (;;) {
        // highest d-exponent term with d-exponent >= dord (largest x breaks ties)
        const Mono* pick = nullptr;
        for (auto& [m, c] : r.terms) {
            if ((std::int64_t)m[1] < dord) continue;
            if (!pick || m[1] > (*pick)[1] || (m[1] == (*pick)[1] && m[0] > (*pick)[0])) pick = &m;
        }
        if (!pick) return r;
        if (++steps > budget) throw BudgetExceededError("weyl_reduce_left budget exceeded");
        Mono qm{(*pick)[0], (std::uint16_t)((*pick)[1] - dord)};
        WeylElement<D> q(r.dom, 1);
        q.terms.emplace(qm, r.dom.mul(r.terms.at(*pick), leadinv));
        r = r - q * L;
    }
}

inline std::vector<std::string> weyl_names(int n) {
    auto names = coordinate_names(n, "x");
    auto d = coordinate_names(n, "d");
    names.insert(names.end(), d.begin(), d.end());
    return names;
}

template <class D>
std::string weyl_to_string(const WeylElement<D>& w) {
    MultiPoly<D> view(w.dom, 2 * w.n);
    view.terms = w.terms;
    return poly_to_string(view, weyl_names(w.n));
}

/// Parse an operator expression in x1..xn, d1..dn.  Multiplication respects
/// the written order, so "d1*x1" and "x1*d1" differ by 1.
template <class D>
struct WeylAlgebraCtx {
    using Value = WeylElement<D>;

    D dom;
    int n;

    Value from_ratio(const BigInt& num, const BigInt& den) {
        return Value::scalar(dom, n, from_big_ratio(dom, num, den));
    }
    Value symbol(const std::string& name, std::size_t pos) {
        if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'd')) {
            int idx = 0;
            for (std::size_t i = 1; i < name.size(); ++i) idx = idx * 10 + (name[i] - '0');
            if (idx >= 1 && idx <= n)
                return name[0] == 'x' ? Value::x(dom, n, idx - 1) : Value::dx(dom, n, idx - 1);
        }
        throw ParseError("unknown operator symbol '" + name + "'", pos);
    }
    Value add(const Value& a, const Value& b) { return a + b; }
    Value sub(const Value& a, const Value& b) { return a - b; }
    Value mul(const Value& a, const Value& b) { return a * b; }
    Value neg(const Value& a) { return -a; }
    Value pow(const Value& a, std::uint32_t e) { return weyl_pow(a, e); }
};

template <class D>
WeylElement<D> parse_weyl(const std::string& text, D dom, int n) {
    WeylAlgebraCtx<D> alg{dom, n};
    ExpressionParser<WeylAlgebraCtx<D>> p(text, alg);
    return p.parse();
}

}  // namespace pweyl
