#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pweyl/connection.hpp"
#include "pweyl/error.hpp"
#include "pweyl/fp.hpp"
#include "pweyl/linalg.hpp"
#include "pweyl/matpoly.hpp"
#include "pweyl/pform.hpp"
#include "pweyl/poly.hpp"

namespace pweyl {

// Lifts of flat connections from F_p to Z/p^2.  A lift is the same matrix
// data with coefficients in Z/p^2; the interesting question is whether a
// flat connection admits a *flat* lift, and the failure is measured by a
// 2-form class: curvature(any lift) is divisible by p, and the quotient is
// a cocycle for the End-connection whose exactness decides liftability.

inline MatE<MultiPoly<Zp2Dom>> lift_mat(const MatE<MultiPoly<FpDom>>& m) {
    MatE<MultiPoly<Zp2Dom>> r(lift_to_zp2(m.proto), m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = lift_to_zp2(m.at(i, j));
    return r;
}

inline MatE<MultiPoly<FpDom>> reduce_mat(const MatE<MultiPoly<Zp2Dom>>& m) {
    MatE<MultiPoly<FpDom>> r(reduce_zp2(m.proto), m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = reduce_zp2(m.at(i, j));
    return r;
}

/// Entrywise (1/p) * m; demands every coefficient divisible by p.
inline MatE<MultiPoly<FpDom>> mat_divide_by_p(const MatE<MultiPoly<Zp2Dom>>& m) {
    MatE<MultiPoly<FpDom>> r(divide_by_p(m.proto), m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = divide_by_p(m.at(i, j));
    return r;
}

/// p * lift(m), the canonical embedding of an F_p matrix into p * (Z/p^2).
inline MatE<MultiPoly<Zp2Dom>> mat_p_shift(const MatE<MultiPoly<FpDom>>& m) {
    auto r = lift_mat(m);
    auto pc = MultiPoly<Zp2Dom>::constant(r.proto.dom, r.proto.nvars, r.proto.dom.from_int((std::int64_t)r.proto.dom.p));
    for (auto& e : r.a) e = pc * e;
    return r;
}

/// Connection over Z/p^2 together with its stated mod-p reduction.
/// flat records exact vanishing of the Z/p^2 curvature.
struct LiftedConnection {
    int n = 0;
    int rank = 0;
    std::vector<MatE<MultiPoly<Zp2Dom>>> theta;
    Connection<MultiPoly<FpDom>> reduction;
    bool flat = false;
};

inline LiftedConnection make_lift(const Connection<MultiPoly<FpDom>>& C,
                                  std::vector<MatE<MultiPoly<Zp2Dom>>> theta) {
    if (C.n < 1 || C.n > 2 || C.rank < 1 || C.rank > 2)
        throw AssertionError("lifts are implemented for n <= 2 and rank <= 2");
    if ((int)theta.size() != C.n) throw AssertionError("need one lifted matrix per coordinate direction");
    for (int i = 0; i < C.n; ++i) {
        const auto& t = theta[(std::size_t)i];
        if (t.rows != C.rank || t.cols != C.rank) throw AssertionError("lifted matrix shape mismatch");
        if (!(reduce_mat(t) - C.theta[(std::size_t)i]).is_zero())
            throw AssertionError("matrix does not reduce to the stated connection mod p");
    }
    LiftedConnection L{C.n, C.rank, std::move(theta), C, true};
    for (int i = 0; i < L.n; ++i)
        for (int j = i + 1; j < L.n; ++j)
            if (!curvature_component(L.theta, i, j).is_zero()) L.flat = false;
    return L;
}

/// The lift with every coefficient represented in [0, p).
inline LiftedConnection monomial_lift(const Connection<MultiPoly<FpDom>>& C) {
    std::vector<MatE<MultiPoly<Zp2Dom>>> th;
    th.reserve(C.theta.size());
    for (const auto& t : C.theta) th.push_back(lift_mat(t));
    return make_lift(C, std::move(th));
}

/// Curvature 2-form of a lift.  On the affine line the 2-form space is zero
/// and the returned form has no components.
inline PForm<MatE<MultiPoly<Zp2Dom>>> lift_curvature(const LiftedConnection& L) {
    std::vector<MatE<MultiPoly<Zp2Dom>>> comp;
    for (int i = 0; i < L.n; ++i)
        for (int j = i + 1; j < L.n; ++j) comp.push_back(curvature_component(L.theta, i, j));
    return PForm<MatE<MultiPoly<Zp2Dom>>>(L.n, 2, std::move(comp));
}

/// Differential of the End-valued complex twisted by theta:
/// D(a) = da + [theta ^ a].  For q=0 the commutator term is [theta_i, a];
/// gauging by I - eps*a moves a connection by +eps*D(a) to first order.
template <class E>
PForm<MatE<E>> end_d(const std::vector<MatE<E>>& theta, const PForm<MatE<E>>& a) {
    const int n = a.n;
    if ((int)theta.size() != n) throw AssertionError("end_d: direction count mismatch");
    if (a.q == 0) {
        std::vector<MatE<E>> c;
        for (int i = 0; i < n; ++i)
            c.push_back(mat_entry_diff(a.comp[0], i) + mat_commutator(theta[(std::size_t)i], a.comp[0]));
        return PForm<MatE<E>>(n, 1, std::move(c));
    }
    if (a.q == 1) {
        std::vector<MatE<E>> c;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                c.push_back(mat_entry_diff(a.comp[(std::size_t)j], i) - mat_entry_diff(a.comp[(std::size_t)i], j) +
                            mat_commutator(theta[(std::size_t)i], a.comp[(std::size_t)j]) -
                            mat_commutator(theta[(std::size_t)j], a.comp[(std::size_t)i]));
        return PForm<MatE<E>>(n, 2, std::move(c));
    }
    throw AssertionError("end_d takes forms of degree 0 or 1");
}

namespace detail {

template <class E>
std::int64_t max_entry_degree(const std::vector<MatE<E>>& ms) {
    std::int64_t d = 0;
    for (const auto& m : ms)
        for (const auto& e : m.a) d = std::max(d, e.degree());
    return d;
}

inline PForm<MatE<MultiPoly<FpDom>>> zero_end_form(const Connection<MultiPoly<FpDom>>& C, int q) {
    MatE<MultiPoly<FpDom>> z(C.theta[0].proto, C.rank, C.rank);
    return PForm<MatE<MultiPoly<FpDom>>>(C.n, q,
        std::vector<MatE<MultiPoly<FpDom>>>((std::size_t)PForm<MatE<MultiPoly<FpDom>>>::form_components(C.n, q), z));
}

// Solve end_d(alpha) = rhs for an unknown q-form alpha with polynomial
// entries of total degree <= bound, by exact linear algebra over F_p on
// monomial coefficients.  Returns a q-form satisfying the equation exactly
// (verified by the caller) or nullopt if the truncated system is
// inconsistent.
inline std::optional<PForm<MatE<MultiPoly<FpDom>>>> solve_end_d(
    const Connection<MultiPoly<FpDom>>& C, int q, const PForm<MatE<MultiPoly<FpDom>>>& rhs, int bound) {
    if (bound < 0) bound = 0;
    const int n = C.n, r = C.rank;
    const auto dom = C.theta[0].proto.dom;
    const int ncomp = PForm<MatE<MultiPoly<FpDom>>>::form_components(n, q);
    const int rcomp = PForm<MatE<MultiPoly<FpDom>>>::form_components(n, q + 1);

    const auto unknown_monos = enumerate_monos(n, bound);
    std::int64_t eqdeg = bound + std::max<std::int64_t>((std::int64_t)0, max_entry_degree(C.theta));
    for (const auto& m : rhs.comp)
        for (const auto& e : m.a) eqdeg = std::max(eqdeg, e.degree());
    const auto row_monos = enumerate_monos(n, (int)eqdeg);
    std::map<Mono, int> row_of;
    for (std::size_t i = 0; i < row_monos.size(); ++i) row_of.emplace(row_monos[i], (int)i);
    const int M = (int)row_monos.size();

    const int ncols = ncomp * r * r * (int)unknown_monos.size();
    const int nrows = rcomp * r * r * M;
    Matrix<FpDom> sys(dom, nrows, ncols);
    auto row_index = [&](int comp, int er, int ec, int mono) {
        return ((comp * r + er) * r + ec) * M + mono;
    };

    const auto zero_poly = C.theta[0].proto;
    int col = 0;
    for (int k = 0; k < ncomp; ++k)
        for (int er = 0; er < r; ++er)
            for (int ec = 0; ec < r; ++ec)
                for (const auto& um : unknown_monos) {
                    auto a = zero_end_form(C, q);
                    a.comp[(std::size_t)k].at(er, ec) =
                        MultiPoly<FpDom>::monomial(dom, n, um, dom.one());
                    auto img = end_d(C.theta, a);
                    for (int kc = 0; kc < rcomp; ++kc)
                        for (int ir = 0; ir < r; ++ir)
                            for (int ic = 0; ic < r; ++ic)
                                for (const auto& [mm, cc] : img.comp[(std::size_t)kc].at(ir, ic).terms)
                                    sys.at(row_index(kc, ir, ic, row_of.at(mm)), col) = cc;
                    ++col;
                }

    std::vector<FpDom::Elem> b((std::size_t)nrows, dom.zero());
    for (int kc = 0; kc < rcomp; ++kc)
        for (int ir = 0; ir < r; ++ir)
            for (int ic = 0; ic < r; ++ic)
                for (const auto& [mm, cc] : rhs.comp[(std::size_t)kc].at(ir, ic).terms)
                    b[(std::size_t)row_index(kc, ir, ic, row_of.at(mm))] = cc;

    auto sol = solve(sys, b);
    if (!sol) return std::nullopt;

    auto a = zero_end_form(C, q);
    col = 0;
    for (int k = 0; k < ncomp; ++k)
        for (int er = 0; er < r; ++er)
            for (int ec = 0; ec < r; ++ec)
                for (const auto& um : unknown_monos) {
                    if (!dom.is_zero((*sol)[(std::size_t)col]))
                        a.comp[(std::size_t)k].at(er, ec).add_term(um, (*sol)[(std::size_t)col]);
                    ++col;
                }
    return a;
}

}  // namespace detail

/// The obstruction to lifting a flat connection on the affine plane to a
/// flat Z/p^2 connection: the class of curvature(lift)/p in the second
/// End-valued de Rham cohomology of the reduction.
struct ObstructionClass {
    bool liftable = false;
    /// Truncation degree used by the rank-2 search; 0 for the rank-1 closed
    /// form.  Positive answers are witness-verified; a negative rank-2
    /// answer only rules out primitives up to this degree.
    int bound = 0;
    bool exact_decision = false;
    /// curvature(monomial lift)/p as an End-valued 2-form over F_p.
    PForm<MatE<MultiPoly<FpDom>>> representative;
    /// Rank 1: monomial coordinates x^(ap+p-1) y^(bp+p-1) of the
    /// representative that survive in cohomology; empty iff liftable.
    std::vector<std::string> cartier_obstructions;
    /// When liftable: a 1-form alpha with D(alpha) = representative.
    std::optional<PForm<MatE<MultiPoly<FpDom>>>> primitive;
    /// When liftable: the corrected lift theta - p*alpha, verified flat.
    std::optional<LiftedConnection> flat_lift;
};

/// curvature(L)/p as a 2-form over F_p.  Well defined because the reduction
/// is flat, so the lift curvature is divisible by p; changing the lift by
/// p*gamma moves the result by end_d(gamma).
inline PForm<MatE<MultiPoly<FpDom>>> obstruction_representative(const LiftedConnection& L) {
    if (L.n != 2) throw AssertionError("the lifting obstruction lives on the affine plane");
    if (!curvature_component(L.reduction.theta, 0, 1).is_zero())
        throw FlatnessError("lifting obstruction needs a flat connection mod p");
    return PForm<MatE<MultiPoly<FpDom>>>(2, 2, {mat_divide_by_p(curvature_component(L.theta, 0, 1))});
}

/// Obstruction extracted from a specific lift.  Liftability and the
/// cohomology class do not depend on the lift chosen; the representative
/// 2-form does, exactly by the image of end_d.
inline ObstructionClass obstruction_from_lift(const LiftedConnection& L, int degree_bound = -1) {
    const auto& C = L.reduction;
    ObstructionClass oc;
    oc.representative = obstruction_representative(L);
    auto& omega_mat = oc.representative.comp[0];
    const auto dom = C.theta[0].proto.dom;
    const auto p = dom.p;

    if (C.rank == 1) {
        // d(alpha) = omega is solvable termwise except on monomials with
        // both exponents = -1 mod p, which span the cokernel (Cartier).
        auto A = C.theta[0].proto, B = C.theta[0].proto;
        for (const auto& [m, c] : omega_mat.at(0, 0).terms) {
            std::uint32_t u = m[0], v = m[1];
            if ((u + 1) % p != 0) {
                Mono mm = m;
                mm[0] = (std::uint16_t)(u + 1);
                B.add_term(mm, dom.div(c, dom.from_int((std::int64_t)(u + 1))));
            } else if ((v + 1) % p != 0) {
                Mono mm = m;
                mm[1] = (std::uint16_t)(v + 1);
                A.add_term(mm, dom.neg(dom.div(c, dom.from_int((std::int64_t)(v + 1)))));
            } else {
                oc.cartier_obstructions.push_back(
                    poly_to_string(MultiPoly<FpDom>::monomial(dom, 2, m, c), coordinate_names(2)));
            }
        }
        oc.liftable = oc.cartier_obstructions.empty();
        oc.exact_decision = true;
        if (oc.liftable) {
            MatE<MultiPoly<FpDom>> mA(C.theta[0].proto, 1, 1), mB(C.theta[0].proto, 1, 1);
            mA.at(0, 0) = A;
            mB.at(0, 0) = B;
            oc.primitive = PForm<MatE<MultiPoly<FpDom>>>(2, 1, {mA, mB});
        }
    } else {
        std::int64_t od = 0;
        for (const auto& e : omega_mat.a) od = std::max(od, e.degree());
        oc.bound = degree_bound >= 0
                       ? degree_bound
                       : (int)(od + detail::max_entry_degree(C.theta) + 2);
        auto alpha = detail::solve_end_d(C, 1, oc.representative, oc.bound);
        oc.liftable = alpha.has_value();
        oc.exact_decision = oc.liftable;  // negatives are bound-relative
        if (alpha) {
            if (!(end_d(C.theta, *alpha) - oc.representative).is_zero())
                throw AssertionError("internal: primitive does not hit the obstruction form");
            oc.primitive = std::move(*alpha);
        }
    }

    if (oc.primitive) {
        std::vector<MatE<MultiPoly<Zp2Dom>>> th;
        for (int i = 0; i < 2; ++i)
            th.push_back(L.theta[(std::size_t)i] - mat_p_shift(oc.primitive->comp[(std::size_t)i]));
        oc.flat_lift = make_lift(C, std::move(th));
        if (!oc.flat_lift->flat)
            throw AssertionError("internal: corrected lift is not flat");
    }
    return oc;
}

inline ObstructionClass obstruction_class(const Connection<MultiPoly<FpDom>>& C, int degree_bound = -1) {
    return obstruction_from_lift(monomial_lift(C), degree_bound);
}

/// Lifts of a fixed flat connection form a torsor under closed End-valued
/// 1-forms: alpha moves theta to theta + p*alpha.  Flatness of the result
/// is preserved exactly when D(alpha) = 0, which is required here.
inline LiftedConnection act_on_lift(const LiftedConnection& L, const PForm<MatE<MultiPoly<FpDom>>>& alpha) {
    if (alpha.q != 1 || alpha.n != L.n) throw AssertionError("the torsor action takes a 1-form on the same space");
    for (const auto& m : alpha.comp)
        if (m.rows != L.rank || m.cols != L.rank) throw AssertionError("1-form matrix shape mismatch");
    if (!end_d(L.reduction.theta, alpha).is_zero())
        throw NotClosedError("1-form is not closed for the End-connection differential");
    std::vector<MatE<MultiPoly<Zp2Dom>>> th;
    for (int i = 0; i < L.n; ++i)
        th.push_back(L.theta[(std::size_t)i] + mat_p_shift(alpha.comp[(std::size_t)i]));
    auto out = make_lift(L.reduction, std::move(th));
    if (L.flat && !out.flat)
        throw AssertionError("internal: closed 1-form failed to preserve flatness");
    return out;
}

/// (theta_1 - theta_2)/p for two lifts of the same reduction, as an
/// End-valued 1-form over F_p.  Closed whenever both lifts are flat.
inline PForm<MatE<MultiPoly<FpDom>>> lift_difference(const LiftedConnection& L1, const LiftedConnection& L2) {
    if (L1.n != L2.n || L1.rank != L2.rank) throw AssertionError("lifts live on different bundles");
    std::vector<MatE<MultiPoly<FpDom>>> comp;
    for (int i = 0; i < L1.n; ++i) {
        if (!(L1.reduction.theta[(std::size_t)i] - L2.reduction.theta[(std::size_t)i]).is_zero())
            throw AssertionError("lifts do not reduce to the same connection");
        comp.push_back(mat_divide_by_p(L1.theta[(std::size_t)i] - L2.theta[(std::size_t)i]));
    }
    return PForm<MatE<MultiPoly<FpDom>>>(L1.n, 1, std::move(comp));
}

/// Decision data for gauge equivalence of two lifts by I + p*(polynomial
/// endomorphism).  A witness eta satisfies D(eta) = (theta_1 - theta_2)/p,
/// equivalently act_on_lift(L2, D(eta)) == L1 on the nose.
struct LiftIsomorphism {
    bool isomorphic = false;
    int bound = 0;
    /// True when the truncation provably decides the question (rank 1:
    /// D = d, so any primitive has degree <= deg(difference) + 1).
    bool bound_certified = false;
    std::optional<MatE<MultiPoly<FpDom>>> witness;
};

inline LiftIsomorphism lifts_isomorphic(const LiftedConnection& L1, const LiftedConnection& L2,
                                        int degree_bound) {
    auto beta = lift_difference(L1, L2);
    std::int64_t bdeg = 0;
    for (const auto& m : beta.comp)
        for (const auto& e : m.a) bdeg = std::max(bdeg, e.degree());

    LiftIsomorphism iso;
    iso.bound = degree_bound;
    iso.bound_certified = (L1.rank == 1) && degree_bound >= (int)bdeg + 1;

    auto eta = detail::solve_end_d(L1.reduction, 0, beta, degree_bound);
    if (!eta) return iso;
    if (!(end_d(L1.reduction.theta, *eta) - beta).is_zero())
        throw AssertionError("internal: witness does not solve the gauge equation");
    iso.isomorphic = true;
    iso.witness = eta->comp[0];
    return iso;
}

}  // namespace pweyl
