#pragma once

#include <optional>
#include <vector>

#include "pweyl/error.hpp"

namespace pweyl {

/// Dense matrix over a field domain D; exact arithmetic throughout.
template <class D>
struct Matrix {
    using Elem = typename D::Elem;

    D dom;
    int rows = 0, cols = 0;
    std::vector<Elem> a;

    Matrix() = default;
    Matrix(D d, int r, int c) : dom(d), rows(r), cols(c), a((std::size_t)r * c, d.zero()) {}

    Elem& at(int i, int j) { return a[(std::size_t)i * cols + j]; }
    const Elem& at(int i, int j) const { return a[(std::size_t)i * cols + j]; }

    static Matrix identity(D d, int n) {
        Matrix m(d, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = d.one();
        return m;
    }

    bool operator==(const Matrix& o) const {
        if (rows != o.rows || cols != o.cols) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!dom.eq(a[i], o.a[i])) return false;
        return true;
    }
};

template <class D>
Matrix<D> mat_mul(const Matrix<D>& x, const Matrix<D>& y) {
    if (x.cols != y.rows) throw AssertionError("matrix shape mismatch");
    Matrix<D> r(x.dom, x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            if (x.dom.is_zero(x.at(i, k))) continue;
            for (int j = 0; j < y.cols; ++j)
                r.at(i, j) = x.dom.add(r.at(i, j), x.dom.mul(x.at(i, k), y.at(k, j)));
        }
    return r;
}

template <class D>
Matrix<D> mat_add(const Matrix<D>& x, const Matrix<D>& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw AssertionError("matrix shape mismatch");
    Matrix<D> r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.dom.add(r.a[i], y.a[i]);
    return r;
}

template <class D>
Matrix<D> mat_sub(const Matrix<D>& x, const Matrix<D>& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw AssertionError("matrix shape mismatch");
    Matrix<D> r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.dom.sub(r.a[i], y.a[i]);
    return r;
}

template <class D>
Matrix<D> mat_pow(const Matrix<D>& x, std::uint64_t e) {
    if (x.rows != x.cols) throw AssertionError("matrix power needs a square matrix");
    Matrix<D> r = Matrix<D>::identity(x.dom, x.rows), base = x;
    while (e) {
        if (e & 1) r = mat_mul(r, base);
        base = mat_mul(base, base);
        e >>= 1;
    }
    return r;
}

/// In-place reduced row echelon form; returns the pivot column of each pivot
/// row (row i of the result has its pivot in pivots[i]).
template <class D>
std::vector<int> rref(Matrix<D>& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int piv = -1;
        for (int i = row; i < m.rows; ++i)
            if (!m.dom.is_zero(m.at(i, col))) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(row, j));
        auto inv = m.dom.inv(m.at(row, col));
        for (int j = col; j < m.cols; ++j) m.at(row, j) = m.dom.mul(inv, m.at(row, j));
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || m.dom.is_zero(m.at(i, col))) continue;
            auto f = m.at(i, col);
            for (int j = col; j < m.cols; ++j)
                m.at(i, j) = m.dom.sub(m.at(i, j), m.dom.mul(f, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class D>
int mat_rank(Matrix<D> m) {
    return (int)rref(m).size();
}

/// Basis of the right nullspace, one vector (length = cols) per column of the
/// returned list.
template <class D>
std::vector<std::vector<typename D::Elem>> nullspace(Matrix<D> m) {
    auto pivots = rref(m);
    std::vector<bool> is_pivot((std::size_t)m.cols, false);
    for (int c : pivots) is_pivot[(std::size_t)c] = true;
    std::vector<std::vector<typename D::Elem>> basis;
    for (int freec = 0; freec < m.cols; ++freec) {
        if (is_pivot[(std::size_t)freec]) continue;
        std::vector<typename D::Elem> v((std::size_t)m.cols, m.dom.zero());
        v[(std::size_t)freec] = m.dom.one();
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[(std::size_t)pivots[r]] = m.dom.neg(m.at((int)r, freec));
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solve m x = b; returns one solution if consistent.
template <class D>
std::optional<std::vector<typename D::Elem>> solve(const Matrix<D>& m,
                                                   const std::vector<typename D::Elem>& b) {
    if ((int)b.size() != m.rows) throw AssertionError("solve: shape mismatch");
    Matrix<D> aug(m.dom, m.rows, m.cols + 1);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[(std::size_t)i];
    }
    auto pivots = rref(aug);
    for (std::size_t r = 0; r < pivots.size(); ++r)
        if (pivots[r] == m.cols) return std::nullopt;  // row (0 ... 0 | 1)
    std::vector<typename D::Elem> x((std::size_t)m.cols, m.dom.zero());
    for (std::size_t r = 0; r < pivots.size(); ++r) x[(std::size_t)pivots[r]] = aug.at((int)r, m.cols);
    return x;
}

template <class D>
std::optional<Matrix<D>> mat_inverse(const Matrix<D>& m) {
    if (m.rows != m.cols) throw AssertionError("inverse needs a square matrix");
    Matrix<D> aug(m.dom, m.rows, 2 * m.cols);
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols + i) = m.dom.one();
    }
    auto pivots = rref(aug);
    if ((int)pivots.size() < m.rows) return std::nullopt;
    for (std::size_t r = 0; r < pivots.size(); ++r)
        if (pivots[r] >= m.cols) return std::nullopt;
    Matrix<D> inv(m.dom, m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) inv.at(i, j) = aug.at(i, m.cols + j);
    return inv;
}

}  // namespace pweyl
