#pragma once

#include <vector>

#include "pweyl/error.hpp"
#include "pweyl/fp.hpp"
#include "pweyl/matpoly.hpp"
#include "pweyl/poly.hpp"

namespace pweyl {

/// Differential form of degree q in {0,1,2} on affine n-space.  V is a ring
/// entry (scalar polynomial, localized polynomial) or a matrix of those.
/// Components: q=0 one entry, q=1 entries for dx_1..dx_n, q=2 entries for
/// dx_i^dx_j with i<j in lexicographic order.
template <class V>
struct PForm {
    int n = 0;
    int q = 0;
    std::vector<V> comp;

    PForm() = default;
    PForm(int n_, int q_, std::vector<V> c) : n(n_), q(q_), comp(std::move(c)) {
        if (q < 0 || q > 2) throw AssertionError("form degree must be 0, 1 or 2");
        if ((int)comp.size() != form_components(n, q)) throw AssertionError("form component count mismatch");
    }

    static int form_components(int n, int q) {
        if (q == 0) return 1;
        if (q == 1) return n;
        return n * (n - 1) / 2;
    }

    // index of dx_i ^ dx_j (0-based, i < j) among degree-2 components
    static int pair_index(int i, int j, int n) {
        if (i >= j) throw AssertionError("pair_index wants i < j");
        int idx = 0;
        for (int a = 0; a < i; ++a) idx += n - 1 - a;
        return idx + (j - i - 1);
    }

    bool is_zero() const {
        for (const auto& c : comp)
            if (!c.is_zero()) return false;
        return true;
    }

    bool operator==(const PForm& o) const { return n == o.n && q == o.q && comp == o.comp; }
};

template <class V>
PForm<V> operator+(const PForm<V>& a, const PForm<V>& b) {
    if (a.n != b.n || a.q != b.q) throw AssertionError("form shape mismatch");
    PForm<V> r = a;
    for (std::size_t i = 0; i < r.comp.size(); ++i) r.comp[i] = r.comp[i] + b.comp[i];
    return r;
}

template <class V>
PForm<V> operator-(const PForm<V>& a, const PForm<V>& b) {
    if (a.n != b.n || a.q != b.q) throw AssertionError("form shape mismatch");
    PForm<V> r = a;
    for (std::size_t i = 0; i < r.comp.size(); ++i) r.comp[i] = r.comp[i] - b.comp[i];
    return r;
}

template <class V>
PForm<V> operator-(const PForm<V>& a) {
    PForm<V> r = a;
    for (auto& c : r.comp) c = -c;
    return r;
}

/// Exterior derivative.  Defined for q=0 and q=1 (q=2 would land in degree 3,
/// which we only need for n<=2 where it vanishes; callers check that case).
template <class V>
PForm<V> form_d(const PForm<V>& a) {
    if (a.q == 0) {
        std::vector<V> c;
        c.reserve(a.n);
        for (int i = 0; i < a.n; ++i) c.push_back(entry_diff(a.comp[0], i));
        return PForm<V>(a.n, 1, std::move(c));
    }
    if (a.q == 1) {
        std::vector<V> c;
        for (int i = 0; i < a.n; ++i)
            for (int j = i + 1; j < a.n; ++j) c.push_back(entry_diff(a.comp[j], i) - entry_diff(a.comp[i], j));
        return PForm<V>(a.n, 2, std::move(c));
    }
    throw AssertionError("exterior derivative implemented for q in {0,1}");
}

/// Wedge of two 1-forms.  Entry multiplication order is preserved, so this is
/// correct for matrix-valued forms as well: (a^b)_ij = a_i b_j - a_j b_i.
template <class V>
PForm<V> form_wedge(const PForm<V>& a, const PForm<V>& b) {
    if (a.n != b.n || a.q != 1 || b.q != 1) throw AssertionError("wedge implemented for pairs of 1-forms");
    std::vector<V> c;
    for (int i = 0; i < a.n; ++i)
        for (int j = i + 1; j < a.n; ++j) c.push_back(a.comp[i] * b.comp[j] - a.comp[j] * b.comp[i]);
    return PForm<V>(a.n, 2, std::move(c));
}

template <class V>
PForm<V> mat_entry_diff_form(const PForm<V>&) = delete;  // use form_d

/// Cartier operator on 1-forms over the affine line in characteristic p:
/// x^k dx maps to x^((k+1)/p - 1) dx when p divides k+1 and to 0 otherwise.
/// It is inverse-Frobenius semilinear and kills exactly the exact forms.
inline PForm<MultiPoly<FpDom>> cartier_line(const PForm<MultiPoly<FpDom>>& w) {
    if (w.n != 1 || w.q != 1) throw AssertionError("cartier_line expects a 1-form on the affine line");
    const auto& f = w.comp[0];
    const std::uint32_t p = f.dom.p;
    MultiPoly<FpDom> out = MultiPoly<FpDom>::zero(f.dom, 1);
    for (const auto& [m, c] : f.terms) {
        std::uint64_t k = m[0];
        if ((k + 1) % p != 0) continue;
        std::uint64_t e = (k + 1) / p - 1;
        Mono mm{(std::uint16_t)e};
        // coefficient transport is the inverse Frobenius; on the prime field
        // that is the identity map
        out.add_term(mm, c);
    }
    return PForm<MultiPoly<FpDom>>(1, 1, {out});
}

}  // namespace pweyl
