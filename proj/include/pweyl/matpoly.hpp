#pragma once

#include <vector>

#include "pweyl/error.hpp"
#include "pweyl/localized.hpp"
#include "pweyl/poly.hpp"

namespace pweyl {

// Uniform entry interface over MultiPoly<D> and LocalizedPoly<D>, so the
// connection code can be written once for polynomial and localized entries.

template <class D>
MultiPoly<D> entry_diff(const MultiPoly<D>& f, int i) { return poly_diff(f, i); }
template <class D>
LocalizedPoly<D> entry_diff(const LocalizedPoly<D>& f, int i) { return localized_diff(f, i); }

template <class D>
MultiPoly<D> zero_like(const MultiPoly<D>& f) { return MultiPoly<D>::zero(f.dom, f.nvars); }
template <class D>
LocalizedPoly<D> zero_like(const LocalizedPoly<D>& f) {
    return LocalizedPoly<D>(MultiPoly<D>::zero(f.num.dom, f.num.nvars), f.den, 0);
}

template <class D>
MultiPoly<D> one_like(const MultiPoly<D>& f) {
    return MultiPoly<D>::constant(f.dom, f.nvars, f.dom.one());
}
template <class D>
LocalizedPoly<D> one_like(const LocalizedPoly<D>& f) {
    return LocalizedPoly<D>(one_like(f.num), f.den, 0);
}

template <class D>
std::string entry_to_string(const MultiPoly<D>& f, const std::vector<std::string>& names) {
    return poly_to_string(f, names);
}
template <class D>
std::string entry_to_string(const LocalizedPoly<D>& f, const std::vector<std::string>& names) {
    return localized_to_string(f, names);
}

/// Dense matrix with ring entries (polynomial or localized polynomial).
/// `proto` is a zero element carrying the ring data; kept so empty and
/// freshly built matrices know their coefficient ring.
template <class E>
struct MatE {
    int rows = 0, cols = 0;
    E proto;
    std::vector<E> a;

    MatE() = default;
    MatE(E proto_, int r, int c) : rows(r), cols(c), proto(zero_like(proto_)), a((std::size_t)r * c, zero_like(proto_)) {}

    E& at(int i, int j) { return a[(std::size_t)i * cols + j]; }
    const E& at(int i, int j) const { return a[(std::size_t)i * cols + j]; }

    static MatE identity(E proto, int nn) {
        MatE m(proto, nn, nn);
        for (int i = 0; i < nn; ++i) m.at(i, i) = one_like(proto);
        return m;
    }

    bool is_zero() const {
        for (const auto& e : a)
            if (!e.is_zero()) return false;
        return true;
    }

    bool operator==(const MatE& o) const {
        if (rows != o.rows || cols != o.cols) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!(a[i] == o.a[i])) return false;
        return true;
    }
};

template <class E>
MatE<E> operator+(const MatE<E>& x, const MatE<E>& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw AssertionError("matrix shape mismatch");
    MatE<E> r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = r.a[i] + y.a[i];
    return r;
}

template <class E>
MatE<E> operator-(const MatE<E>& x, const MatE<E>& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw AssertionError("matrix shape mismatch");
    MatE<E> r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = r.a[i] - y.a[i];
    return r;
}

template <class E>
MatE<E> operator-(const MatE<E>& x) {
    MatE<E> r = x;
    for (auto& e : r.a) e = -e;
    return r;
}

template <class E>
MatE<E> operator*(const MatE<E>& x, const MatE<E>& y) {
    if (x.cols != y.rows) throw AssertionError("matrix shape mismatch");
    MatE<E> r(x.proto, x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int kk = 0; kk < x.cols; ++kk) {
            if (x.at(i, kk).is_zero()) continue;
            for (int j = 0; j < y.cols; ++j) {
                if (y.at(kk, j).is_zero()) continue;
                r.at(i, j) = r.at(i, j) + x.at(i, kk) * y.at(kk, j);
            }
        }
    return r;
}

template <class E>
MatE<E> scalar_mul(const E& s, const MatE<E>& x) {
    MatE<E> r = x;
    for (auto& e : r.a) e = s * e;
    return r;
}

template <class E>
MatE<E> mat_entry_diff(const MatE<E>& x, int i) {
    MatE<E> r = x;
    for (auto& e : r.a) e = entry_diff(e, i);
    return r;
}

template <class E>
MatE<E> mat_pow_e(const MatE<E>& x, std::uint64_t e) {
    if (x.rows != x.cols) throw AssertionError("matrix power needs a square matrix");
    MatE<E> acc = MatE<E>::identity(x.proto, x.rows);
    MatE<E> base = x;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = (e >>= 1) ? base * base : base;
    }
    return acc;
}

template <class E>
std::vector<E> mat_vec(const MatE<E>& m, const std::vector<E>& v) {
    if ((int)v.size() != m.cols) throw AssertionError("matrix-vector shape mismatch");
    std::vector<E> r((std::size_t)m.rows, zero_like(m.proto));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (!m.at(i, j).is_zero() && !v[j].is_zero()) r[i] = r[i] + m.at(i, j) * v[j];
    return r;
}

template <class E>
MatE<E> mat_commutator(const MatE<E>& x, const MatE<E>& y) {
    return x * y - y * x;
}

/// Promote a polynomial matrix into the localization at g.
template <class D>
MatE<LocalizedPoly<D>> localize_matrix(const MatE<MultiPoly<D>>& m, const MultiPoly<D>& g) {
    LocalizedPoly<D> proto(MultiPoly<D>::zero(m.proto.dom, m.proto.nvars), g, 0);
    MatE<LocalizedPoly<D>> r(proto, m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = LocalizedPoly<D>(m.at(i, j), g, 0);
    return r;
}

}  // namespace pweyl
