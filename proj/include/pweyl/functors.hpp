#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pweyl/connection.hpp"
#include "pweyl/error.hpp"
#include "pweyl/groebner.hpp"
#include "pweyl/localized.hpp"
#include "pweyl/matpoly.hpp"
#include "pweyl/poly.hpp"
#include "pweyl/psupport.hpp"

namespace pweyl {

// ---------------------------------------------------------------------------
// Module constructors and transfer along finite coverings of the line.
// ---------------------------------------------------------------------------

/// Rank-one connection d + df twisting the structure sheaf by exp(f).
template <class D>
Connection<MultiPoly<D>> exponential_module(const MultiPoly<D>& f) {
    const int n = f.nvars;
    if (n < 1) throw AssertionError("potential must live in at least one variable");
    std::vector<MatE<MultiPoly<D>>> th;
    for (int i = 0; i < n; ++i) {
        MatE<MultiPoly<D>> t(MultiPoly<D>::zero(f.dom, n), 1, 1);
        t.at(0, 0) = poly_diff(f, i);
        th.push_back(std::move(t));
    }
    return make_connection(n, 1, std::move(th));
}

/// Finite covering of the affine line, x = pi(z).
struct FiniteCurveMap {
    MultiPoly<FpDom> pi;   // target coordinate as a polynomial in z
    MultiPoly<FpDom> dpi;  // its derivative; the covering is etale off its zeros

    explicit FiniteCurveMap(const MultiPoly<FpDom>& f) : pi(f), dpi(poly_diff(f, 0)) {
        if (f.nvars != 1) throw AssertionError("curve map must be a one-variable polynomial");
        if (f.degree() < 1) throw AssertionError("curve map must be nonconstant");
    }
    int degree() const { return (int)pi.degree(); }
};

namespace detail {

/// Determinant of a small polynomial matrix by minor expansion.
template <class D>
MultiPoly<D> poly_det(const MatE<MultiPoly<D>>& m) {
    if (m.rows != m.cols) throw AssertionError("determinant of a non-square matrix");
    const int n = m.rows;
    if (n > 8) throw BudgetExceededError("determinant expansion limited to matrices up to 8x8");
    std::vector<int> act(n);
    for (int i = 0; i < n; ++i) act[(std::size_t)i] = i;
    std::function<MultiPoly<D>(int, std::vector<int>&)> go = [&](int row,
                                                                 std::vector<int>& cols) {
        if (row == n) return one_like(m.proto);
        auto acc = zero_like(m.proto);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            int c = cols[k];
            if (m.at(row, c).is_zero()) continue;
            std::vector<int> rest;
            for (std::size_t t = 0; t < cols.size(); ++t)
                if (t != k) rest.push_back(cols[t]);
            auto sub = m.at(row, c) * go(row + 1, rest);
            acc = (k % 2 == 0) ? acc + sub : acc - sub;
        }
        return acc;
    };
    return go(0, act);
}

/// Adjugate: adj * m = m * adj = det(m) * identity.
template <class D>
MatE<MultiPoly<D>> poly_adjugate(const MatE<MultiPoly<D>>& m) {
    const int n = m.rows;
    MatE<MultiPoly<D>> adj(m.proto, n, n);
    if (n == 1) {
        adj.at(0, 0) = one_like(m.proto);
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MatE<MultiPoly<D>> minor(m.proto, n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc) = m.at(r, c);
                    ++cc;
                }
                ++rr;
            }
            auto cof = poly_det(minor);
            adj.at(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
        }
    return adj;
}

/// Companion matrix of multiplication by z on F[x][z]/(pi(z) - x), in the
/// basis 1, z, .., z^(deg-1); entries are polynomials in x.
inline MatE<MultiPoly<FpDom>> multiplication_by_z(const FiniteCurveMap& m) {
    const FpDom dom = m.pi.dom;
    const int d = m.degree();
    std::vector<FpDom::Elem> c((std::size_t)d + 1, dom.zero());
    for (const auto& [mono, coef] : m.pi.terms) c[mono[0]] = coef;
    auto linv = dom.inv(c[(std::size_t)d]);
    auto proto = MultiPoly<FpDom>::zero(dom, 1);
    MatE<MultiPoly<FpDom>> Mz(proto, d, d);
    for (int j = 0; j + 1 < d; ++j) Mz.at(j + 1, j) = MultiPoly<FpDom>::constant(dom, 1, dom.one());
    // z^d = (x - c_0 - c_1 z - ..) / lead
    Mz.at(0, d - 1) = MultiPoly<FpDom>::variable(dom, 1, 0) * MultiPoly<FpDom>::constant(dom, 1, linv) -
                      MultiPoly<FpDom>::constant(dom, 1, dom.mul(c[0], linv));
    for (int t = 1; t < d; ++t)
        Mz.at(t, d - 1) = Mz.at(t, d - 1) -
                          MultiPoly<FpDom>::constant(dom, 1, dom.mul(c[(std::size_t)t], linv));
    return Mz;
}

/// Coordinates of the class of q(z) in the basis 1, z, .., z^(deg-1), via
/// Horner evaluation q(Mz) applied to the first basis vector.
inline std::vector<MultiPoly<FpDom>> reduce_z_class(const MultiPoly<FpDom>& q,
                                                    const MatE<MultiPoly<FpDom>>& Mz) {
    const FpDom dom = q.dom;
    const int d = Mz.rows;
    std::vector<FpDom::Elem> qc((std::size_t)std::max<std::int64_t>(q.degree(), 0) + 1, dom.zero());
    for (const auto& [mono, coef] : q.terms) qc[mono[0]] = coef;
    std::vector<MultiPoly<FpDom>> v((std::size_t)d, MultiPoly<FpDom>::zero(dom, 1));
    for (int t = (int)qc.size() - 1; t >= 0; --t) {
        std::vector<MultiPoly<FpDom>> w((std::size_t)d, MultiPoly<FpDom>::zero(dom, 1));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                if (Mz.at(i, j).is_zero() || v[(std::size_t)j].is_zero()) continue;
                w[(std::size_t)i] = w[(std::size_t)i] + Mz.at(i, j) * v[(std::size_t)j];
            }
        w[0] = w[0] + MultiPoly<FpDom>::constant(dom, 1, qc[(std::size_t)t]);
        v = std::move(w);
    }
    return v;
}

}  // namespace detail

/// Pushforward of a connection on the source line along x = pi(z): the module
/// keeps its sections, now over F[x] with basis z^j e_k (z-power fastest),
/// and the derivation becomes (1/pi'(z)) d/dz.  Entries are computed through
/// the adjugate of multiplication by pi'(z), so they live over the target
/// localized at the norm of pi' (the image of the discriminant); for
/// everywhere-etale coverings the norm is constant, every entry is a
/// polynomial, and the coordinate substitutes as a dummy denominator.
inline Connection<LocalizedPoly<FpDom>> finite_pushforward_curve(
    const Connection<MultiPoly<FpDom>>& C, const FiniteCurveMap& m) {
    if (C.n != 1) throw AssertionError("pushforward implemented for coverings of the line");
    const FpDom dom = m.pi.dom;
    const int d = m.degree();
    const int r = C.rank;

    if (m.dpi.is_zero())
        throw DenominatorEscapeError("covering is inseparable: the discriminant vanishes");
    auto Mz = detail::multiplication_by_z(m);
    // multiplication by pi'(z) and its inverse through the adjugate
    MatE<MultiPoly<FpDom>> N(MultiPoly<FpDom>::zero(dom, 1), d, d);
    {
        std::vector<FpDom::Elem> dc((std::size_t)m.dpi.degree() + 1, dom.zero());
        for (const auto& [mono, coef] : m.dpi.terms) dc[mono[0]] = coef;
        for (int t = (int)dc.size() - 1; t >= 0; --t) {
            N = N * Mz;
            for (int i = 0; i < d; ++i)
                N.at(i, i) = N.at(i, i) + MultiPoly<FpDom>::constant(dom, 1, dc[(std::size_t)t]);
        }
    }
    auto det = detail::poly_det(N);
    if (det.is_zero())
        throw DenominatorEscapeError("discriminant image vanishes identically");
    auto adj = detail::poly_adjugate(N);
    // normalize the denominator to a monic polynomial
    auto lc = det.terms.rbegin()->second;
    auto scale = MultiPoly<FpDom>::constant(dom, 1, dom.inv(lc));
    det = det * scale;
    adj = scalar_mul(scale, adj);

    const bool etale_everywhere = det.is_constant();
    auto den = etale_everywhere ? MultiPoly<FpDom>::variable(dom, 1, 0) : det;
    using L = LocalizedPoly<FpDom>;
    auto proto = L::from_poly(MultiPoly<FpDom>::zero(dom, 1), den);

    MatE<L> T(proto, r * d, r * d);
    auto z = MultiPoly<FpDom>::variable(dom, 1, 0);  // source coordinate within entries
    for (int k = 0; k < r; ++k)
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < r; ++i) {
                // z-polynomial part of the e_i component of (d/dz)(z^j e_k)
                auto q = C.theta[0].at(i, k) * poly_pow(z, (std::uint32_t)j);
                if (i == k && j > 0)
                    q = q + MultiPoly<FpDom>::monomial(dom, 1, Mono{(std::uint16_t)(j - 1)},
                                                       dom.from_int(j));
                if (q.is_zero()) continue;
                auto v = detail::reduce_z_class(q, Mz);
                for (int t = 0; t < d; ++t) {
                    auto num = MultiPoly<FpDom>::zero(dom, 1);
                    for (int u = 0; u < d; ++u) {
                        if (adj.at(t, u).is_zero() || v[(std::size_t)u].is_zero()) continue;
                        num = num + adj.at(t, u) * v[(std::size_t)u];
                    }
                    if (num.is_zero()) continue;
                    T.at(i * d + t, k * d + j) = T.at(i * d + t, k * d + j) +
                                                 (etale_everywhere
                                                      ? L::from_poly(num * MultiPoly<FpDom>::constant(
                                                                               dom, 1, dom.inv(det.constant_term())),
                                                                     den)
                                                      : L(num, den, 1));
                }
            }
    return make_connection(1, r * d, std::vector<MatE<L>>{T});
}

/// Pushforward of cycle components along x = pi(z).  In twisted coordinates
/// the covering reads X = pi(Z) and the cotangent direction rescales by
/// zeta = pi'(Z) s, because the Frobenius twist fixes prime-field
/// coefficients.  Each component maps to its image curve; the multiplicity
/// transforms by the degree of the induced map between the curves,
/// deg(pi) * (source fiber degree) / (image fiber degree).
inline std::vector<CycleComponent> cycle_pushforward(const std::vector<CycleComponent>& src,
                                                     const FiniteCurveMap& m, std::uint32_t p,
                                                     const GroebnerOptions& gopt = {}) {
    if (src.empty()) return {};
    const FpDom dom = m.pi.dom;
    const int dpi = m.degree();

    // variables (t, Z, zeta, X, s); t is the saturation helper
    auto var = [&](int i) { return MultiPoly<FpDom>::variable(dom, 5, i); };
    auto piZ = substitute(m.pi, std::vector<MultiPoly<FpDom>>{var(1)});
    auto dpiZ = substitute(m.dpi, std::vector<MultiPoly<FpDom>>{var(1)});

    struct Image {
        MultiPoly<FpDom> poly;
        bool certified;
        int fiber_points;
        int weight;  // accumulated multiplicity * deg(pi) * source fiber degree
    };
    std::map<std::string, Image> images;

    for (const auto& comp : src) {
        std::vector<MultiPoly<FpDom>> gens;
        gens.push_back(substitute(comp.eliminant, std::vector<MultiPoly<FpDom>>{var(1), var(2)}));
        gens.push_back(var(2) - dpiZ * var(4));
        gens.push_back(var(3) - piZ);
        gens.push_back(MultiPoly<FpDom>::constant(dom, 5, dom.one()) - var(0) * dpiZ);
        auto elim = eliminate(gens, std::vector<int>{0, 1, 2}, gopt);
        bool unit = false;
        for (const auto& g : elim)
            if (g.is_constant() && !g.is_zero()) unit = true;
        if (unit)
            throw DenominatorEscapeError(
                "component lies inside the ramification locus; its image is not computed");
        if (elim.empty()) throw AssertionError("image of a curve component cannot be dense");
        MultiPoly<FpDom> h(dom, 2);
        for (const auto& g : elim) h = detail::bivariate_gcd(h, g);
        auto hgb = buchberger(elim, gopt);
        if (hgb.gens.size() == 1) h = hgb.gens[0];
        if (h.is_constant()) throw AssertionError("image ideal of a component is not principal");

        auto fac = factor_bivariate_squarefree(h);
        if (fac.factors.size() != 1) {
            if (comp.irreducible_certified)
                throw AssertionError("image of an irreducible component split");
            throw NonStableError("uncertified source component has a reducible image");
        }
        const auto& f = fac.factors[0];
        auto model = detail::separable_model(f.poly, p);
        const int db = (int)model.degree_in(1);
        if (db < 1) throw AssertionError("image component is vertical over the target line");

        auto key = poly_to_string(f.poly, coordinate_names(2));
        auto it = images.find(key);
        if (it == images.end()) {
            images.emplace(key, Image{f.poly, f.irreducible_certified && comp.irreducible_certified,
                                      db, comp.multiplicity * dpi * comp.fiber_points});
        } else {
            it->second.weight += comp.multiplicity * dpi * comp.fiber_points;
            it->second.certified = it->second.certified && comp.irreducible_certified;
        }
    }

    std::vector<CycleComponent> out;
    for (auto& [key, im] : images) {
        if (im.weight % im.fiber_points != 0)
            throw AssertionError("pushed multiplicity is not integral");
        CycleComponent c;
        c.eliminant = im.poly;
        c.irreducible_certified = im.certified;
        c.fiber_points = im.fiber_points;
        c.multiplicity = im.weight / im.fiber_points;
        out.push_back(std::move(c));
    }
    // same canonical order as the component factorization
    std::sort(out.begin(), out.end(), [](const CycleComponent& a, const CycleComponent& b) {
        if (a.eliminant.degree() != b.eliminant.degree())
            return a.eliminant.degree() < b.eliminant.degree();
        auto sa = poly_to_string(a.eliminant, {"u", "v"});
        auto sb = poly_to_string(b.eliminant, {"u", "v"});
        if (sa.size() != sb.size()) return sa.size() < sb.size();
        return sa < sb;
    });
    return out;
}

}  // namespace pweyl
