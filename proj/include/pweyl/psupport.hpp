#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pweyl/bifactor.hpp"
#include "pweyl/connection.hpp"
#include "pweyl/error.hpp"
#include "pweyl/fq.hpp"
#include "pweyl/groebner.hpp"
#include "pweyl/linalg.hpp"
#include "pweyl/localized.hpp"
#include "pweyl/matpoly.hpp"
#include "pweyl/weyl.hpp"

namespace pweyl {

// ---------------------------------------------------------------------------
// p-supports and p-cycles.  The p-curvature matrices commute and are
// O-linear, so the center F_p[X_1..X_n, s_1..s_n] acts on the module through
// X_i -> x_i^p and s_i -> Psi_i.  The annihilator of that action cuts out
// the p-support in the twisted cotangent space; counting generalized
// eigenspaces of the Psi action on one good fiber gives the cycle
// multiplicities.
// ---------------------------------------------------------------------------

template <class D>
MultiPoly<D> entry_from_poly(const MultiPoly<D>&, MultiPoly<D> f) {
    return f;
}

template <class D>
LocalizedPoly<D> entry_from_poly(const LocalizedPoly<D>& proto, MultiPoly<D> f) {
    return LocalizedPoly<D>(std::move(f), proto.den, 0);
}

template <class D>
D entry_poly_dom(const MultiPoly<D>& e) {
    return e.dom;
}

template <class D>
D entry_poly_dom(const LocalizedPoly<D>& e) {
    return e.num.dom;
}

template <class D>
int entry_poly_nvars(const MultiPoly<D>& e) {
    return e.nvars;
}

template <class D>
int entry_poly_nvars(const LocalizedPoly<D>& e) {
    return e.num.nvars;
}

/// Plain polynomial matrices pass through unchanged.
template <class D>
std::vector<MatE<MultiPoly<D>>> clear_denominators(const std::vector<MatE<MultiPoly<D>>>& ms) {
    return ms;
}

/// Localized matrices are scaled by a common denominator power g^K; the
/// relation sum c_t V_t = 0 is unchanged because g is not a zero divisor.
template <class D>
std::vector<MatE<MultiPoly<D>>> clear_denominators(const std::vector<MatE<LocalizedPoly<D>>>& ms) {
    std::vector<MatE<MultiPoly<D>>> out;
    if (ms.empty()) return out;
    std::uint32_t K = 0;
    for (const auto& m : ms)
        for (const auto& e : m.a) K = std::max(K, e.k);
    const MultiPoly<D>& den = ms[0].proto.den;
    std::map<std::uint32_t, MultiPoly<D>> cache;
    auto den_pow = [&](std::uint32_t e) {
        auto it = cache.find(e);
        if (it != cache.end()) return it->second;
        auto v = poly_pow(den, e);
        cache.emplace(e, v);
        return v;
    };
    for (const auto& m : ms) {
        MatE<MultiPoly<D>> o(zero_like(m.proto.num), m.rows, m.cols);
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) {
                const auto& e = m.at(i, j);
                o.at(i, j) = e.num * den_pow(K - e.k);
            }
        out.push_back(std::move(o));
    }
    return out;
}

struct AnnihilatorOptions {
    int start_bound = 2;
    int max_bound = 16;
    std::uint64_t cell_budget = 50'000'000;  // rows*cols cap for the relation matrix
    GroebnerOptions gb;
};

struct CenterAnnihilator {
    GroebnerBasis<FpDom> gb;  // reduced grevlex basis in X_1..X_n, s_1..s_n
    int stable_bound = 0;     // basis at this degree equals the one at twice it
};

namespace detail {

/// Reduced basis of all relations among the center monomials of total degree
/// at most D acting on the module.
template <class E>
GroebnerBasis<FpDom> center_relations(const PCurvature<E>& pc, int D,
                                      std::uint64_t cell_budget, const GroebnerOptions& gopt) {
    const int n = (int)pc.psi.size();
    const int r = pc.psi[0].rows;
    const E& proto = pc.psi[0].proto;
    const FpDom dom = entry_poly_dom(proto);

    // powers of each Psi_i up to D
    std::vector<std::vector<MatE<E>>> pows((std::size_t)n);
    for (int i = 0; i < n; ++i) {
        pows[(std::size_t)i].push_back(MatE<E>::identity(proto, r));
        for (int b = 1; b <= D; ++b)
            pows[(std::size_t)i].push_back(pows[(std::size_t)i].back() * pc.psi[(std::size_t)i]);
    }

    auto monos = enumerate_monos(2 * n, D);
    std::vector<MatE<E>> vals;
    vals.reserve(monos.size());
    for (const auto& m : monos) {
        MatE<E> V = MatE<E>::identity(proto, r);
        for (int i = 0; i < n; ++i)
            if (m[(std::size_t)(n + i)]) V = V * pows[(std::size_t)i][m[(std::size_t)(n + i)]];
        Mono xm((std::size_t)n, 0);
        for (int i = 0; i < n; ++i) xm[(std::size_t)i] = (std::uint16_t)(pc.p * m[(std::size_t)i]);
        auto xpoly = MultiPoly<FpDom>::monomial(dom, n, xm, dom.one());
        V = scalar_mul(entry_from_poly(proto, xpoly), V);
        vals.push_back(std::move(V));
    }
    auto cleared = clear_denominators(vals);

    // coefficient rows indexed by (matrix slot, x-monomial)
    std::map<std::pair<int, Mono>, int> ridx;
    for (const auto& V : cleared)
        for (int s = 0; s < r * r; ++s)
            for (const auto& [xm, c] : V.a[(std::size_t)s].terms) {
                auto key = std::make_pair(s, xm);
                if (!ridx.count(key)) ridx.emplace(key, (int)ridx.size());
            }
    const int rows = std::max<int>(1, (int)ridx.size());
    const int cols = (int)cleared.size();
    if ((std::uint64_t)rows * (std::uint64_t)cols > cell_budget)
        throw BudgetExceededError("center relation matrix exceeds the cell budget");
    Matrix<FpDom> B(dom, rows, cols);
    for (int t = 0; t < cols; ++t)
        for (int s = 0; s < r * r; ++s)
            for (const auto& [xm, c] : cleared[(std::size_t)t].a[(std::size_t)s].terms)
                B.at(ridx.at(std::make_pair(s, xm)), t) = c;

    auto ns = nullspace(B);
    if (ns.empty()) return zero_ideal(dom, 2 * n);
    std::vector<MultiPoly<FpDom>> rels;
    rels.reserve(ns.size());
    for (const auto& v : ns) {
        MultiPoly<FpDom> rel(dom, 2 * n);
        for (int t = 0; t < cols; ++t)
            if (!dom.is_zero(v[(std::size_t)t])) rel.add_term(monos[(std::size_t)t], v[(std::size_t)t]);
        rels.push_back(std::move(rel));
    }
    return buchberger(rels, gopt);
}

}  // namespace detail

/// Annihilator of the module in the center, by doubling the monomial degree
/// bound until the reduced basis repeats (a nonzero basis seen twice in a
/// row).  Throws NonStableError when the limit is reached first.
template <class E>
CenterAnnihilator annihilator_in_center(const PCurvature<E>& pc,
                                        const AnnihilatorOptions& opts = {}) {
    if (pc.psi.empty()) throw AssertionError("p-curvature has no components");
    GroebnerOptions gopt = opts.gb;
    gopt.order = MonomialOrder::grevlex();
    std::optional<GroebnerBasis<FpDom>> prev;
    int prev_bound = 0;
    for (int D = opts.start_bound; D <= opts.max_bound; D *= 2) {
        auto gb = detail::center_relations(pc, D, opts.cell_budget, gopt);
        if (prev && !prev->gens.empty() && prev->gens == gb.gens)
            return CenterAnnihilator{gb, prev_bound};
        prev = std::move(gb);
        prev_bound = D;
    }
    throw NonStableError("center annihilator did not stabilize below the degree limit");
}

// ---------------------------------------------------------------------------
// Lagrangian sampling: look for smooth F_q points of the support and test
// isotropy of the tangent space for the form sum dX_i ^ ds_i.
// ---------------------------------------------------------------------------

struct LagrangianCheck {
    bool dimension_ok = false;  // krull dimension equals n
    int dimension = -1;
    int samples = 0;     // smooth points examined
    bool isotropic = false;  // tangent spaces isotropic at every sample
    int sample_field_degree = 0;
    std::vector<std::string> sample_points;
};

namespace detail {

/// Tangent-space test at one candidate point; returns false if the point is
/// not smooth (jacobian rank != n), otherwise appends the isotropy verdict.
inline bool lagrangian_probe(const std::vector<MultiPoly<FqDom>>& gens,
                             const std::vector<std::vector<MultiPoly<FqDom>>>& jac,
                             const FqDom& K, const std::vector<FqDom::Elem>& pt, int n,
                             bool& isotropic_all) {
    const int vars = 2 * n;
    Matrix<FqDom> J(K, (int)gens.size(), vars);
    for (int g = 0; g < (int)gens.size(); ++g)
        for (int v = 0; v < vars; ++v)
            J.at(g, v) = poly_eval(jac[(std::size_t)g][(std::size_t)v], pt);
    if (mat_rank(J) != n) return false;
    auto tangent = nullspace(J);
    if ((int)tangent.size() != n) return false;
    for (std::size_t u = 0; u < tangent.size(); ++u)
        for (std::size_t w = u + 1; w < tangent.size(); ++w) {
            auto val = K.zero();
            for (int i = 0; i < n; ++i) {
                auto a = K.mul(tangent[u][(std::size_t)i], tangent[w][(std::size_t)(n + i)]);
                auto b = K.mul(tangent[u][(std::size_t)(n + i)], tangent[w][(std::size_t)i]);
                val = K.add(val, K.sub(a, b));
            }
            if (!K.is_zero(val)) isotropic_all = false;
        }
    return true;
}

inline std::string point_str(const FqDom& K, const std::vector<FqDom::Elem>& pt) {
    std::string s = "(";
    for (std::size_t i = 0; i < pt.size(); ++i) {
        if (i) s += ", ";
        s += K.str(pt[(std::size_t)i]);
    }
    return s + ")";
}

}  // namespace detail

/// Dimension check plus smooth-point isotropy sampling (n <= 2).  Samples
/// are drawn from F_{p^m} with m up to 6 on the line and m = 1 on the plane;
/// throws NoSmoothSampleError when the dimension is right but every candidate
/// point is singular.
inline LagrangianCheck is_lagrangian_candidate(const GroebnerBasis<FpDom>& gb, int n,
                                               std::uint32_t p, int max_samples = 5,
                                               int max_field_degree = 6) {
    if (n < 1 || n > 2) throw AssertionError("lagrangian sampling implemented for n <= 2");
    LagrangianCheck out;
    out.dimension = krull_dimension(gb);
    out.dimension_ok = (out.dimension == n);
    if (!out.dimension_ok || gb.gens.empty()) return out;

    // derivatives over F_p once, embedded per field
    std::vector<std::vector<MultiPoly<FpDom>>> dgens;
    for (const auto& g : gb.gens) {
        std::vector<MultiPoly<FpDom>> row;
        for (int v = 0; v < 2 * n; ++v) row.push_back(poly_diff(g, v));
        dgens.push_back(std::move(row));
    }

    const int degree_cap = (n == 1) ? max_field_degree : 1;
    for (int m = 1; m <= degree_cap; ++m) {
        FqDom K(p, m);
        std::vector<MultiPoly<FqDom>> gens;
        for (const auto& g : gb.gens) gens.push_back(embed_poly(g, K));
        std::vector<std::vector<MultiPoly<FqDom>>> jac;
        for (const auto& row : dgens) {
            std::vector<MultiPoly<FqDom>> erow;
            for (const auto& d : row) erow.push_back(embed_poly(d, K));
            jac.push_back(std::move(erow));
        }
        bool isotropic_all = true;
        int found = 0;
        auto consider = [&](const std::vector<FqDom::Elem>& pt) {
            if (found >= max_samples) return;
            for (const auto& g : gens)
                if (!K.is_zero(poly_eval(g, pt))) return;
            if (detail::lagrangian_probe(gens, jac, K, pt, n, isotropic_all)) {
                ++found;
                out.sample_points.push_back(detail::point_str(K, pt));
            }
        };
        if (n == 1) {
            for (std::uint64_t ai = 0; ai < K.size() && found < max_samples; ++ai) {
                auto a = K.element(ai);
                // common roots in s of the generators specialized at X = a
                auto g_a = UniPoly<FqDom>::zero(K);
                for (const auto& g : gens) {
                    std::vector<FqDom::Elem> c((std::size_t)g.degree_in(1) + 1, K.zero());
                    for (const auto& [mono, coef] : g.terms)
                        c[(std::size_t)mono[1]] =
                            K.add(c[(std::size_t)mono[1]], K.mul(coef, K.pow(a, mono[0])));
                    g_a = uni_gcd(g_a, UniPoly<FqDom>(K, std::move(c)));
                }
                if (g_a.is_zero()) {
                    // every generator vanishes along the whole fiber X = a
                    for (std::uint64_t si = 0; si < K.size() && found < max_samples; ++si)
                        consider({a, K.element(si)});
                    continue;
                }
                if (g_a.deg() < 1) continue;
                for (const auto& root : poly_roots(g_a)) consider({a, root});
            }
        } else {
            const std::uint64_t q = K.size();
            for (std::uint64_t i0 = 0; i0 < q && found < max_samples; ++i0)
                for (std::uint64_t i1 = 0; i1 < q && found < max_samples; ++i1)
                    for (std::uint64_t i2 = 0; i2 < q && found < max_samples; ++i2)
                        for (std::uint64_t i3 = 0; i3 < q && found < max_samples; ++i3)
                            consider({K.element(i0), K.element(i1), K.element(i2), K.element(i3)});
        }
        if (found > 0) {
            out.samples = found;
            out.isotropic = isotropic_all;
            out.sample_field_degree = m;
            return out;
        }
    }
    throw NoSmoothSampleError("no smooth point found on the support up to the field degree limit");
}

struct PSupportReport {
    CenterAnnihilator ann;
    int dimension = -1;
    LagrangianCheck lagrangian;
};

template <class E>
PSupportReport p_support_of(const PCurvature<E>& pc, int n, const AnnihilatorOptions& opts = {}) {
    PSupportReport rep;
    rep.ann = annihilator_in_center(pc, opts);
    rep.dimension = krull_dimension(rep.ann.gb);
    rep.lagrangian = is_lagrangian_candidate(rep.ann.gb, n, pc.p);
    return rep;
}

template <class E>
PSupportReport p_support(const Connection<E>& C, const AnnihilatorOptions& opts = {}) {
    return p_support_of(p_curvature(C), C.n, opts);
}

// ---------------------------------------------------------------------------
// Cyclic modules D/Dw on the line: companion connection on 1, d, .., d^(r-1).
// ---------------------------------------------------------------------------

/// Companion-form connection of a cyclic module D/Dw for an operator of
/// positive order whose leading coefficient is a nonzero constant.
inline Connection<MultiPoly<FpDom>> cyclic_connection(const WeylElement<FpDom>& w) {
    if (w.n != 1) throw AssertionError("cyclic modules handled on the line only");
    const FpDom dom = w.dom;
    int d = 0;
    for (const auto& [m, c] : w.terms) d = std::max<int>(d, m[1]);
    if (d < 1) throw AssertionError("operator must have positive order");
    // coefficient polynomials a_i(x)
    std::vector<MultiPoly<FpDom>> coef((std::size_t)d + 1, MultiPoly<FpDom>(dom, 1));
    for (const auto& [m, c] : w.terms) coef[(std::size_t)m[1]].add_term(Mono{m[0]}, c);
    if (!coef[(std::size_t)d].is_constant())
        throw NotMonicError("leading coefficient must be a nonzero constant");
    auto lead_inv = dom.inv(coef[(std::size_t)d].constant_term());

    auto proto = MultiPoly<FpDom>::zero(dom, 1);
    MatE<MultiPoly<FpDom>> T(proto, d, d);
    for (int j = 0; j + 1 < d; ++j) T.at(j + 1, j) = MultiPoly<FpDom>::constant(dom, 1, dom.one());
    for (int i = 0; i < d; ++i) {
        auto e = map_coeffs(coef[(std::size_t)i], dom,
                            [&](FpDom::Elem c) { return dom.neg(dom.mul(c, lead_inv)); });
        T.at(i, d - 1) = e;
    }
    return make_connection(1, d, std::vector<MatE<MultiPoly<FpDom>>>{T});
}

// ---------------------------------------------------------------------------
// p-cycles on the line.
// ---------------------------------------------------------------------------

struct CycleComponent {
    MultiPoly<FpDom> eliminant;  // canonical factor in (X, s)
    bool irreducible_certified = true;
    int fiber_points = 0;  // geometric points above the sample; the component degree
    int multiplicity = 0;
};

struct PCycleOptions {
    AnnihilatorOptions ann;
    int max_field_degree = 6;
};

struct PCycleReport {
    std::uint32_t p = 0;
    int rank = 0;
    CenterAnnihilator ann;
    std::vector<CycleComponent> components;
    int sample_field_degree = 1;
    std::string sample_point;
    int fiber_dimension = 0;     // rank * p
    bool mass_formula_ok = false;  // sum of multiplicity * degree equals the rank
};

namespace detail {

/// Strip p-power s-exponents until the polynomial is separable in s; the
/// result has the same reduced fiber over every point of the X-line.
inline MultiPoly<FpDom> separable_model(const MultiPoly<FpDom>& f, std::uint32_t p) {
    auto v = f;
    while (v.degree_in(1) > 0 && poly_diff(v, 1).is_zero()) {
        MultiPoly<FpDom> w(v.dom, 2);
        for (const auto& [m, c] : v.terms) {
            if (m[1] % p) throw AssertionError("inseparable eliminant is not a p-power in s");
            w.add_term(Mono{m[0], (std::uint16_t)(m[1] / p)}, c);
        }
        v = w;
    }
    return v;
}

/// Full bivariate gcd (content and primitive part).
inline MultiPoly<FpDom> bivariate_gcd(const MultiPoly<FpDom>& a, const MultiPoly<FpDom>& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    auto A = sx_from_multipoly(a), B = sx_from_multipoly(b);
    auto ct = uni_gcd(sx_content(A), sx_content(B));
    auto pp = sx_gcd(A, B);
    return sx_to_multipoly(sx_scale(ct, pp));
}

/// Reduce a one-variable F_p polynomial into K[x]/(x^p - a).
inline UniPoly<FqDom> fiber_reduce(const MultiPoly<FpDom>& f, const FqDom& K, FqDom::Elem a) {
    std::vector<FqDom::Elem> c((std::size_t)K.p, K.zero());
    for (const auto& [m, coef] : f.terms) {
        std::uint32_t hi = m[0] / K.p, lo = m[0] % K.p;
        c[lo] = K.add(c[lo], K.mul(K.embed(coef), K.pow(a, hi)));
    }
    return UniPoly<FqDom>(K, std::move(c));
}

/// Substitute X = a in a polynomial in (X, s), leaving a polynomial in s.
inline UniPoly<FqDom> eval_x_bivariate(const MultiPoly<FpDom>& f, const FqDom& K, FqDom::Elem a) {
    std::vector<FqDom::Elem> c((std::size_t)std::max<std::int64_t>(f.degree_in(1), 0) + 1, K.zero());
    for (const auto& [m, coef] : f.terms)
        c[m[1]] = K.add(c[m[1]], K.mul(K.embed(coef), K.pow(a, m[0])));
    return UniPoly<FqDom>(K, std::move(c));
}

inline UniPoly<FqDom> fiber_entry(const MultiPoly<FpDom>& e, const FqDom& K, FqDom::Elem a,
                                  const UniPoly<FqDom>& M) {
    (void)M;
    return fiber_reduce(e, K, a);
}

inline UniPoly<FqDom> fiber_entry(const LocalizedPoly<FpDom>& e, const FqDom& K, FqDom::Elem a,
                                  const UniPoly<FqDom>& M) {
    auto numr = fiber_reduce(e.num, K, a);
    if (e.k == 0) return numr;
    auto denr = fiber_reduce(e.den, K, a);
    auto inv = uni_modinv(denr, M);
    if (!inv) throw SampleDegenerateError("denominator is not invertible in the fiber");
    auto ik = uni_powmod(*inv, BigInt(e.k), M);
    return uni_mod(numr * ik, M);
}

/// Apply a univariate polynomial to a square matrix (Horner).
inline Matrix<FqDom> matrix_poly(const UniPoly<FqDom>& f, const Matrix<FqDom>& S) {
    auto R = Matrix<FqDom>(S.dom, S.rows, S.cols);
    for (int i = f.deg(); i >= 0; --i) {
        R = mat_mul(R, S);
        auto c = f.coeff(i);
        if (!S.dom.is_zero(c))
            for (int j = 0; j < S.rows; ++j) R.at(j, j) = S.dom.add(R.at(j, j), c);
    }
    return R;
}

template <class E>
std::vector<CycleComponent> fiber_multiplicities(const PCurvature<E>& pc, int rank,
                                                 const std::vector<BiFactor>& factors,
                                                 const std::vector<MultiPoly<FpDom>>& separable,
                                                 const FqDom& K, FqDom::Elem a) {
    const std::uint32_t p = pc.p;
    const int fiber_dim = rank * (int)p;

    // sample admissibility: every separable model keeps its s-degree and
    // stays squarefree at X = a, and no two components share a root there
    std::vector<UniPoly<FqDom>> u;
    for (const auto& v : separable) {
        auto uv = eval_x_bivariate(v, K, a);
        if (uv.deg() != (int)v.degree_in(1))
            throw SampleDegenerateError("component degree drops at the sample");
        if (uni_gcd(uv, uni_diff(uv)).deg() != 0)
            throw SampleDegenerateError("component fiber is not squarefree at the sample");
        u.push_back(std::move(uv));
    }
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j)
            if (uni_gcd(u[i], u[j]).deg() != 0)
                throw SampleDegenerateError("components collide above the sample");

    // the s-action on the fiber: multiplication by Psi on (K[x]/(x^p - a))^rank
    std::vector<FqDom::Elem> mc{K.neg(a)};
    mc.resize((std::size_t)p + 1, K.zero());
    mc[(std::size_t)p] = K.one();
    UniPoly<FqDom> M(K, std::move(mc));  // x^p - a
    const auto& psi = pc.psi[0];
    Matrix<FqDom> S(K, fiber_dim, fiber_dim);
    auto x1 = UniPoly<FqDom>::xpow(K, 1);
    for (int j = 0; j < rank; ++j)
        for (int i = 0; i < rank; ++i) {
            auto val = fiber_entry(psi.at(i, j), K, a, M);
            auto cur = val;
            for (std::uint32_t uu = 0; uu < p; ++uu) {
                for (int v = 0; v <= cur.deg(); ++v)
                    S.at(i * (int)p + v, j * (int)p + (int)uu) = cur.coeff(v);
                if (uu + 1 < p) cur = uni_mod(cur * x1, M);
            }
        }

    std::vector<CycleComponent> comps;
    int dim_total = 0;
    for (std::size_t ci = 0; ci < factors.size(); ++ci) {
        auto w = eval_x_bivariate(factors[ci].poly, K, a);
        auto wsf = squarefree_part(w, p);
        if (wsf.deg() != (int)separable[ci].degree_in(1))
            throw SampleDegenerateError("fiber point count disagrees with the separable model");
        const int d = wsf.deg();
        auto P = mat_pow(matrix_poly(w, S), (std::uint64_t)fiber_dim);
        const int dimE = fiber_dim - mat_rank(P);
        if (dimE % ((int)p * d) != 0)
            throw SampleDegenerateError("eigenspace dimension is not divisible by the fiber size");
        const int mult = dimE / ((int)p * d);
        // every irreducible part of the fiber must carry the same multiplicity
        for (const auto& [piF, piM] : factor_univariate(wsf)) {
            auto Q = mat_pow(matrix_poly(piF, S), (std::uint64_t)fiber_dim);
            int dk = fiber_dim - mat_rank(Q);
            if (dk != (int)p * mult * piF.deg()) {
                if (!factors[ci].irreducible_certified)
                    throw NonStableError(
                        "component could not be split and carries unequal local multiplicities");
                throw SampleDegenerateError("local multiplicities disagree within a component");
            }
        }
        CycleComponent cc;
        cc.eliminant = factors[ci].poly;
        cc.irreducible_certified = factors[ci].irreducible_certified;
        cc.fiber_points = d;
        cc.multiplicity = mult;
        comps.push_back(std::move(cc));
        dim_total += dimE;
    }
    if (dim_total != fiber_dim)
        throw SampleDegenerateError("generalized eigenspaces do not fill the fiber");
    return comps;
}

}  // namespace detail

/// p-cycle of a one-variable module from its p-curvature: support components
/// with their fiber degrees and multiplicities, plus the annihilator ideal.
template <class E>
PCycleReport p_cycle_of(const PCurvature<E>& pc, int rank, const PCycleOptions& opts = {}) {
    if (pc.psi.size() != 1) throw AssertionError("p-cycles implemented on the line only");
    PCycleReport rep;
    rep.p = pc.p;
    rep.rank = rank;
    rep.fiber_dimension = rank * (int)pc.p;
    rep.ann = annihilator_in_center(pc, opts.ann);
    const FpDom dom = rep.ann.gb.dom;

    if (krull_dimension(rep.ann.gb) != 1)
        throw AssertionError("support of the module is not a curve");

    // radical generator: the support is a hypersurface, so the reduced ideal
    // is principal and its generator divides the gcd of the basis
    MultiPoly<FpDom> g(dom, 2);
    for (const auto& f : rep.ann.gb.gens) g = detail::bivariate_gcd(g, f);
    if (g.is_constant())
        throw NonStableError("support ideal has no principal radical generator");

    auto fac = factor_bivariate_squarefree(g);
    std::vector<BiFactor> kept;
    for (auto& f : fac.factors) {
        // keep the factors that actually contain a curve component
        auto gens2 = rep.ann.gb.gens;
        gens2.push_back(f.poly);
        GroebnerOptions gopt = opts.ann.gb;
        gopt.order = MonomialOrder::grevlex();
        if (krull_dimension(buchberger(gens2, gopt)) == 1) kept.push_back(f);
    }
    if (kept.empty()) throw AssertionError("no curve component survived the dimension filter");

    // separable models: strip p-power s-exponents so fibers can be counted
    std::vector<MultiPoly<FpDom>> separable;
    for (auto& f : kept) {
        if (f.poly.degree_in(1) == 0)
            throw SampleDegenerateError("support has a vertical component over the X-line");
        separable.push_back(detail::separable_model(f.poly, pc.p));
    }

    for (int m = 1; m <= opts.max_field_degree; ++m) {
        FqDom K(pc.p, m);
        for (std::uint64_t ai = 0; ai < K.size(); ++ai) {
            auto a = K.element(ai);
            try {
                rep.components = detail::fiber_multiplicities(pc, rank, kept, separable, K, a);
            } catch (const SampleDegenerateError&) {
                continue;
            }
            rep.sample_field_degree = m;
            rep.sample_point = K.str(a);
            int mass = 0;
            for (const auto& c : rep.components) mass += c.multiplicity * c.fiber_points;
            rep.mass_formula_ok = (mass == rank);
            if (!rep.mass_formula_ok)
                throw AssertionError("cycle mass does not match the rank");
            return rep;
        }
    }
    throw SampleDegenerateError("no usable fiber sample up to the field degree limit");
}

template <class E>
PCycleReport p_cycle(const Connection<E>& C, const PCycleOptions& opts = {}) {
    if (C.n != 1) throw AssertionError("p-cycles implemented on the line only");
    return p_cycle_of(p_curvature(C), C.rank, opts);
}

}  // namespace pweyl
