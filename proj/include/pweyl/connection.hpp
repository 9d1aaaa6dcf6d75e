#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pweyl/error.hpp"
#include "pweyl/fp.hpp"
#include "pweyl/linalg.hpp"
#include "pweyl/matpoly.hpp"
#include "pweyl/parse.hpp"
#include "pweyl/pform.hpp"
#include "pweyl/poly.hpp"

namespace pweyl {

template <class D>
std::uint32_t entry_char_of(const MultiPoly<D>& f) { return (std::uint32_t)f.dom.p; }
template <class D>
std::uint32_t entry_char_of(const LocalizedPoly<D>& f) { return (std::uint32_t)f.num.dom.p; }

/// Connection on the trivial bundle O^rank over affine n-space, given by its
/// matrices theta[i] in the direction d/dx_i.  Columns follow the basis:
/// theta[i].at(r, c) is the e_r coefficient of (nabla_i e_c) minus the
/// derivative part, i.e. nabla_i v = d_i v + theta[i] * v on column vectors.
template <class E>
struct Connection {
    int n = 0;
    int rank = 0;
    std::vector<MatE<E>> theta;
};

/// Higgs bundle: same shape, but the operator has no derivative part and the
/// integrability condition is that the theta[i] commute.
template <class E>
struct HiggsBundle {
    int n = 0;
    int rank = 0;
    std::vector<MatE<E>> theta;
};

/// Curvature matrix in the (i,j) coordinate plane: d_i T_j - d_j T_i + [T_i, T_j].
template <class E>
MatE<E> curvature_component(const std::vector<MatE<E>>& theta, int i, int j) {
    return mat_entry_diff(theta[j], i) - mat_entry_diff(theta[i], j) + mat_commutator(theta[i], theta[j]);
}

template <class E>
Connection<E> make_connection(int n, int rank, std::vector<MatE<E>> theta, bool check_flat = true) {
    if ((int)theta.size() != n) throw AssertionError("need one matrix per coordinate direction");
    for (const auto& t : theta)
        if (t.rows != rank || t.cols != rank) throw AssertionError("connection matrix shape mismatch");
    if (check_flat)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (!curvature_component(theta, i, j).is_zero())
                    throw FlatnessError("connection is not flat");
    return Connection<E>{n, rank, std::move(theta)};
}

template <class E>
HiggsBundle<E> make_higgs(int n, int rank, std::vector<MatE<E>> theta, bool check_flat = true) {
    if ((int)theta.size() != n) throw AssertionError("need one matrix per coordinate direction");
    for (const auto& t : theta)
        if (t.rows != rank || t.cols != rank) throw AssertionError("Higgs field shape mismatch");
    if (check_flat)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (!mat_commutator(theta[i], theta[j]).is_zero())
                    throw FlatnessError("Higgs fields do not commute");
    return HiggsBundle<E>{n, rank, std::move(theta)};
}

// initializer-list forms so call sites can write make_connection(n, r, {T1, T2})
template <class E>
Connection<E> make_connection(int n, int rank, std::initializer_list<MatE<E>> theta, bool check_flat = true) {
    return make_connection(n, rank, std::vector<MatE<E>>(theta), check_flat);
}
template <class E>
HiggsBundle<E> make_higgs(int n, int rank, std::initializer_list<MatE<E>> theta, bool check_flat = true) {
    return make_higgs(n, rank, std::vector<MatE<E>>(theta), check_flat);
}

/// p-curvature of a flat connection in characteristic p: Psi_i is the matrix
/// of (d_i + theta_i)^p acting on the standard basis columns; the derivative
/// contribution of the p-th iterate is zero on O-linear input, so the result
/// is again an O-linear endomorphism.  Verifies that the Psi_i commute with
/// one another and are horizontal: d_j Psi_i + [theta_j, Psi_i] = 0.
template <class E>
struct PCurvature {
    std::uint32_t p = 0;
    std::vector<MatE<E>> psi;
};

template <class E>
PCurvature<E> p_curvature(const Connection<E>& C, bool check = true) {
    const std::uint32_t p = entry_char_of(C.theta.at(0).proto);
    PCurvature<E> out;
    out.p = p;
    for (int i = 0; i < C.n; ++i) {
        MatE<E> psi(C.theta[i].proto, C.rank, C.rank);
        for (int c = 0; c < C.rank; ++c) {
            std::vector<E> v((std::size_t)C.rank, zero_like(C.theta[i].proto));
            v[c] = one_like(C.theta[i].proto);
            for (std::uint32_t it = 0; it < p; ++it) {
                std::vector<E> w = mat_vec(C.theta[i], v);
                for (int r = 0; r < C.rank; ++r) w[r] = w[r] + entry_diff(v[r], i);
                v = std::move(w);
            }
            for (int r = 0; r < C.rank; ++r) psi.at(r, c) = v[r];
        }
        out.psi.push_back(std::move(psi));
    }
    if (check) {
        for (int i = 0; i < C.n; ++i)
            for (int j = 0; j < C.n; ++j) {
                if (j > i && !mat_commutator(out.psi[i], out.psi[j]).is_zero())
                    throw AssertionError("p-curvature matrices fail to commute");
                MatE<E> h = mat_entry_diff(out.psi[i], j) + mat_commutator(C.theta[j], out.psi[i]);
                if (!h.is_zero()) throw AssertionError("p-curvature is not horizontal");
            }
    }
    return out;
}

/// Lambda-connection: entries live in n+1 variables with the deformation
/// parameter last, and the operator in direction i is lambda*d_i + theta_i.
/// Integrability: lambda*(d_i theta_j - d_j theta_i) + [theta_i, theta_j] = 0.
template <class D>
struct LambdaConnection {
    int n = 0;
    int rank = 0;
    std::vector<MatE<MultiPoly<D>>> theta;
};

template <class D>
LambdaConnection<D> make_lambda_connection(int n, int rank, std::vector<MatE<MultiPoly<D>>> theta,
                                           bool check_flat = true) {
    if ((int)theta.size() != n) throw AssertionError("need one matrix per coordinate direction");
    for (const auto& t : theta) {
        if (t.rows != rank || t.cols != rank) throw AssertionError("connection matrix shape mismatch");
        if (t.proto.nvars != n + 1) throw AssertionError("lambda-connection entries need n+1 variables");
    }
    if (check_flat) {
        auto lam = MultiPoly<D>::variable(theta[0].proto.dom, n + 1, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                MatE<MultiPoly<D>> c =
                    scalar_mul(lam, mat_entry_diff(theta[j], i) - mat_entry_diff(theta[i], j)) +
                    mat_commutator(theta[i], theta[j]);
                if (!c.is_zero()) throw FlatnessError("lambda-connection is not flat");
            }
    }
    return LambdaConnection<D>{n, rank, std::move(theta)};
}

template <class D>
LambdaConnection<D> make_lambda_connection(int n, int rank, std::initializer_list<MatE<MultiPoly<D>>> theta,
                                           bool check_flat = true) {
    return make_lambda_connection(n, rank, std::vector<MatE<MultiPoly<D>>>(theta), check_flat);
}

template <class D>
PCurvature<MultiPoly<D>> p_curvature_lambda(const LambdaConnection<D>& C, bool check = true) {
    const std::uint32_t p = entry_char_of(C.theta.at(0).proto);
    auto lam = MultiPoly<D>::variable(C.theta[0].proto.dom, C.n + 1, C.n);
    PCurvature<MultiPoly<D>> out;
    out.p = p;
    for (int i = 0; i < C.n; ++i) {
        MatE<MultiPoly<D>> psi(C.theta[i].proto, C.rank, C.rank);
        for (int c = 0; c < C.rank; ++c) {
            std::vector<MultiPoly<D>> v((std::size_t)C.rank, zero_like(C.theta[i].proto));
            v[c] = one_like(C.theta[i].proto);
            for (std::uint32_t it = 0; it < p; ++it) {
                std::vector<MultiPoly<D>> w = mat_vec(C.theta[i], v);
                for (int r = 0; r < C.rank; ++r) w[r] = w[r] + lam * poly_diff(v[r], i);
                v = std::move(w);
            }
            for (int r = 0; r < C.rank; ++r) psi.at(r, c) = v[r];
        }
        out.psi.push_back(std::move(psi));
    }
    if (check) {
        for (int i = 0; i < C.n; ++i)
            for (int j = 0; j < C.n; ++j) {
                if (j > i && !mat_commutator(out.psi[i], out.psi[j]).is_zero())
                    throw AssertionError("lambda p-curvature matrices fail to commute");
                MatE<MultiPoly<D>> h =
                    scalar_mul(lam, mat_entry_diff(out.psi[i], j)) + mat_commutator(C.theta[j], out.psi[i]);
                if (!h.is_zero()) throw AssertionError("lambda p-curvature is not horizontal");
            }
    }
    return out;
}

/// Substitute a constant for the deformation parameter, landing back in n
/// variables.
template <class D>
MatE<MultiPoly<D>> specialize_lambda(const MatE<MultiPoly<D>>& m, const typename D::Elem& value) {
    int n = m.proto.nvars - 1;
    std::vector<MultiPoly<D>> images;
    images.reserve(n + 1);
    for (int i = 0; i < n; ++i) images.push_back(MultiPoly<D>::variable(m.proto.dom, n, i));
    images.push_back(MultiPoly<D>::constant(m.proto.dom, n, value));
    MatE<MultiPoly<D>> r(MultiPoly<D>::zero(m.proto.dom, n), m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = substitute(m.at(i, j), images);
    return r;
}

/// Extend entries of an n-variable matrix to n+1 variables (parameter last).
template <class D>
MatE<MultiPoly<D>> embed_with_lambda(const MatE<MultiPoly<D>>& m) {
    int n = m.proto.nvars;
    std::vector<MultiPoly<D>> images;
    for (int i = 0; i < n; ++i) images.push_back(MultiPoly<D>::variable(m.proto.dom, n + 1, i));
    MatE<MultiPoly<D>> r(MultiPoly<D>::zero(m.proto.dom, n + 1), m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = substitute(m.at(i, j), images);
    return r;
}

/// Induced connection on End(M).  Basis E_ab is flattened row-major as a*rank+b,
/// and the operator sends eta to d_i eta + [theta_i, eta].
template <class E>
Connection<E> endo_connection(const Connection<E>& C) {
    int r = C.rank;
    std::vector<MatE<E>> theta;
    for (int i = 0; i < C.n; ++i) {
        MatE<E> m(C.theta[i].proto, r * r, r * r);
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) {
                for (int c = 0; c < r; ++c) {
                    // left multiplication: (theta * eta)_ab picks eta_cb
                    m.at(a * r + b, c * r + b) = m.at(a * r + b, c * r + b) + C.theta[i].at(a, c);
                    // right multiplication: (eta * theta)_ab picks eta_ac
                    m.at(a * r + b, a * r + c) = m.at(a * r + b, a * r + c) - C.theta[i].at(c, b);
                }
            }
        theta.push_back(std::move(m));
    }
    return make_connection(C.n, r * r, std::move(theta), /*check_flat=*/false);
}

/// Flatten a rank x rank matrix into the End basis used by endo_connection.
template <class E>
std::vector<E> endo_vec(const MatE<E>& eta) {
    std::vector<E> v;
    v.reserve((std::size_t)eta.rows * eta.cols);
    for (int a = 0; a < eta.rows; ++a)
        for (int b = 0; b < eta.cols; ++b) v.push_back(eta.at(a, b));
    return v;
}

/// Pullback along a polynomial map phi: A^m -> A^n, phi given by n
/// polynomials in m variables.  theta'_i = sum_j d_i(phi_j) * phi*(theta_j).
template <class D>
Connection<MultiPoly<D>> pullback(const Connection<MultiPoly<D>>& C, const std::vector<MultiPoly<D>>& phi,
                                  int m) {
    if ((int)phi.size() != C.n) throw AssertionError("pullback map must have one polynomial per target coordinate");
    for (const auto& f : phi)
        if (f.nvars != m) throw AssertionError("pullback map component variable count mismatch");
    auto dom = C.theta[0].proto.dom;
    auto sub_entry = [&](const MultiPoly<D>& f) { return substitute(f, phi); };
    std::vector<MatE<MultiPoly<D>>> theta;
    for (int i = 0; i < m; ++i) {
        MatE<MultiPoly<D>> t(MultiPoly<D>::zero(dom, m), C.rank, C.rank);
        for (int j = 0; j < C.n; ++j) {
            MultiPoly<D> dphi = poly_diff(phi[j], i);
            if (dphi.is_zero()) continue;
            for (int a = 0; a < C.rank; ++a)
                for (int b = 0; b < C.rank; ++b)
                    if (!C.theta[j].at(a, b).is_zero())
                        t.at(a, b) = t.at(a, b) + dphi * sub_entry(C.theta[j].at(a, b));
        }
        theta.push_back(std::move(t));
    }
    return make_connection(m, C.rank, std::move(theta), /*check_flat=*/m <= 2);
}

/// Gauge action: theta'_i = g theta_i g^-1 - (d_i g) g^-1.  The caller
/// supplies the inverse; both directions of the inverse law are checked.
template <class E>
Connection<E> gauge_transform(const Connection<E>& C, const MatE<E>& g, const MatE<E>& g_inv) {
    MatE<E> id = MatE<E>::identity(g.proto, g.rows);
    if (!(g * g_inv == id) || !(g_inv * g == id)) throw AssertionError("gauge matrix inverse is wrong");
    std::vector<MatE<E>> theta;
    for (int i = 0; i < C.n; ++i)
        theta.push_back(g * C.theta[i] * g_inv - mat_entry_diff(g, i) * g_inv);
    return make_connection(C.n, C.rank, std::move(theta), /*check_flat=*/false);
}

/// Parse helpers: build a connection from row-major entry strings in the
/// coordinates x1..xn (plus trailing l for the lambda variant).
template <class D>
MatE<MultiPoly<D>> matrix_from_strings(const D& dom, int nvars, const std::vector<std::string>& names, int rank,
                                       const std::vector<std::vector<std::string>>& entries) {
    if ((int)entries.size() != rank) throw AssertionError("entry row count mismatch");
    MatE<MultiPoly<D>> m(MultiPoly<D>::zero(dom, nvars), rank, rank);
    for (int i = 0; i < rank; ++i) {
        if ((int)entries[i].size() != rank) throw AssertionError("entry column count mismatch");
        for (int j = 0; j < rank; ++j) m.at(i, j) = parse_poly(entries[i][j], dom, names);
    }
    return m;
}

template <class D>
Connection<MultiPoly<D>> connection_from_strings(const D& dom, int n, int rank,
                                                 const std::vector<std::vector<std::vector<std::string>>>& theta) {
    if ((int)theta.size() != n) throw AssertionError("need one matrix per coordinate direction");
    auto names = coordinate_names(n);
    std::vector<MatE<MultiPoly<D>>> ms;
    for (int i = 0; i < n; ++i) ms.push_back(matrix_from_strings(dom, n, names, rank, theta[i]));
    return make_connection(n, rank, std::move(ms));
}

// ---------------------------------------------------------------------------
// Truncated de Rham and Higgs cohomology (n <= 2).
//
// The complex M -> M (x) Omega^1 -> M (x) Omega^2 is cut down to finite
// dimension by a degree bound: sections of degree <= d in degree 0, and each
// application of the differential is allowed to raise degree by the shift
// t = -1 when every theta vanishes, otherwise max total degree of the theta
// entries.  Kernels and cokernels are then exact linear algebra over the
// coefficient field.  Multiplication by x_i^p preserves closedness; its
// action is recorded on each basis class and flagged when the product leaves
// the truncation window.
// ---------------------------------------------------------------------------

template <class D>
struct CohomologyClassAction {
    bool escapes = false;
    std::vector<typename D::Elem> coords;  // in the degree's basis when !escapes
};

template <class D>
struct CohomologyDegree {
    int form_degree = 0;
    int bound = -1;
    int dim = 0;
    // basis[c] is a flattened form: parts[comp*rank + row], comp indexing the
    // q-form components in the PForm order
    std::vector<std::vector<MultiPoly<D>>> basis;
    std::vector<std::vector<CohomologyClassAction<D>>> x_action;  // [var][class]
};

template <class D>
struct DeRhamReport {
    int n = 0;
    int rank = 0;
    int source_bound = 0;
    int shift = -1;
    bool with_derivative = true;
    std::vector<CohomologyDegree<D>> h;
};

namespace detail {

inline std::vector<Mono> enumerate_monos(int nvars, int bound) {
    std::vector<Mono> out;
    if (bound < 0) return out;
    Mono m(nvars, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == nvars) {
            out.push_back(m);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            m[pos] = (std::uint16_t)e;
            rec(pos + 1, left - e);
        }
        m[pos] = 0;
    };
    rec(0, bound);
    return out;
}

template <class D>
struct FormSpace {
    D dom;
    int nvars = 0, rank = 0, q = 0, bound = -1, comps = 0;
    std::vector<Mono> monos;
    std::unordered_map<Mono, int, MonoHash> mono_index;

    FormSpace(const D& d, int nv, int r, int q_, int b)
        : dom(d), nvars(nv), rank(r), q(q_), bound(b), comps(PForm<MultiPoly<D>>::form_components(nv, q_)) {
        monos = enumerate_monos(nvars, bound);
        for (int i = 0; i < (int)monos.size(); ++i) mono_index.emplace(monos[i], i);
    }

    int dim() const { return comps * rank * (int)monos.size(); }
    int index(int comp, int row, int mono_idx) const {
        return (comp * rank + row) * (int)monos.size() + mono_idx;
    }

    std::vector<MultiPoly<D>> zero_parts() const {
        return std::vector<MultiPoly<D>>((std::size_t)comps * rank, MultiPoly<D>::zero(dom, nvars));
    }

    bool fits(const std::vector<MultiPoly<D>>& parts) const {
        for (const auto& f : parts)
            if (f.degree() > bound) return false;
        return true;
    }

    std::vector<typename D::Elem> to_coords(const std::vector<MultiPoly<D>>& parts) const {
        std::vector<typename D::Elem> v((std::size_t)dim(), dom.zero());
        for (int cr = 0; cr < comps * rank; ++cr)
            for (const auto& [m, c] : parts[cr].terms) {
                auto it = mono_index.find(m);
                if (it == mono_index.end()) throw AssertionError("form leaves the truncation window");
                v[(std::size_t)cr * monos.size() + it->second] = c;
            }
        return v;
    }

    std::vector<MultiPoly<D>> from_coords(const std::vector<typename D::Elem>& v) const {
        auto parts = zero_parts();
        for (int cr = 0; cr < comps * rank; ++cr)
            for (int mi = 0; mi < (int)monos.size(); ++mi) {
                const auto& c = v[(std::size_t)cr * monos.size() + mi];
                if (!dom.is_zero(c)) parts[cr].add_term(monos[mi], c);
            }
        return parts;
    }
};

/// Apply the (possibly derivative-free) twisted de Rham differential to a
/// flattened q-form; result is a flattened (q+1)-form.
template <class D>
std::vector<MultiPoly<D>> apply_differential(const std::vector<MatE<MultiPoly<D>>>& theta, bool with_derivative,
                                             int n, int rank, int q,
                                             const std::vector<MultiPoly<D>>& parts) {
    const auto& proto = theta[0].proto;
    auto nabla_dir = [&](int i, const std::vector<MultiPoly<D>>& vec) {
        std::vector<MultiPoly<D>> w((std::size_t)rank, zero_like(proto));
        for (int r = 0; r < rank; ++r) {
            if (with_derivative) w[r] = poly_diff(vec[r], i);
            for (int c = 0; c < rank; ++c)
                if (!theta[i].at(r, c).is_zero() && !vec[c].is_zero())
                    w[r] = w[r] + theta[i].at(r, c) * vec[c];
        }
        return w;
    };
    auto slice = [&](int comp, const std::vector<MultiPoly<D>>& ps) {
        return std::vector<MultiPoly<D>>(ps.begin() + (std::size_t)comp * rank,
                                         ps.begin() + (std::size_t)(comp + 1) * rank);
    };
    if (q == 0) {
        std::vector<MultiPoly<D>> out;
        for (int i = 0; i < n; ++i) {
            auto w = nabla_dir(i, parts);
            out.insert(out.end(), w.begin(), w.end());
        }
        return out;
    }
    if (q == 1) {
        std::vector<MultiPoly<D>> out;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                auto a = nabla_dir(i, slice(j, parts));
                auto b = nabla_dir(j, slice(i, parts));
                for (int r = 0; r < rank; ++r) out.push_back(a[r] - b[r]);
            }
        return out;
    }
    throw AssertionError("differential implemented for q in {0,1}");
}

template <class D>
DeRhamReport<D> truncated_cohomology(const std::vector<MatE<MultiPoly<D>>>& theta, int n, int rank, int bound,
                                     bool with_derivative) {
    if (n < 1 || n > 2) throw AssertionError("cohomology implemented for n <= 2");
    if (bound < 0) throw AssertionError("truncation bound must be nonnegative");
    const D dom = theta[0].proto.dom;
    const std::uint32_t p = (std::uint32_t)dom.p;

    int shift = -1;
    for (const auto& t : theta)
        for (const auto& e : t.a) shift = std::max(shift, (int)e.degree());
    if (shift < 0) shift = -1;  // all theta vanish: differential lowers degree

    DeRhamReport<D> rep;
    rep.n = n;
    rep.rank = rank;
    rep.source_bound = bound;
    rep.shift = shift;
    rep.with_derivative = with_derivative;

    std::vector<FormSpace<D>> spaces;
    for (int q = 0; q <= n; ++q) spaces.emplace_back(dom, n, rank, q, bound + q * shift);

    // differentials as dense matrices over the coefficient field
    std::vector<Matrix<D>> dmat;
    for (int q = 0; q < n; ++q) {
        Matrix<D> m(dom, spaces[q + 1].dim(), spaces[q].dim());
        for (int cr = 0; cr < spaces[q].comps * rank; ++cr)
            for (int mi = 0; mi < (int)spaces[q].monos.size(); ++mi) {
                auto parts = spaces[q].zero_parts();
                parts[cr].add_term(spaces[q].monos[mi], dom.one());
                auto img = apply_differential(theta, with_derivative, n, rank, q, parts);
                auto coords = spaces[q + 1].to_coords(img);
                int col = (int)((std::size_t)cr * spaces[q].monos.size() + mi);
                for (int r = 0; r < (int)coords.size(); ++r)
                    if (!dom.is_zero(coords[r])) m.at(r, col) = coords[r];
            }
        dmat.push_back(std::move(m));
    }

    // echelon rows as plain vectors; reduce v against rows (rows have unit pivots)
    auto reduce_by = [&](std::vector<typename D::Elem>& v,
                         const std::vector<std::vector<typename D::Elem>>& rows,
                         const std::vector<int>& pivots) {
        std::vector<typename D::Elem> used(rows.size(), dom.zero());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            // copy, not reference: the subtraction loop writes v[pivots[r]]
            const auto c = v[pivots[r]];
            if (dom.is_zero(c)) continue;
            used[r] = c;
            for (std::size_t j = 0; j < v.size(); ++j)
                v[j] = dom.sub(v[j], dom.mul(c, rows[r][j]));
        }
        return used;
    };
    auto echelonize = [&](std::vector<std::vector<typename D::Elem>> rows, int width) {
        Matrix<D> m(dom, (int)rows.size(), width);
        for (int i = 0; i < (int)rows.size(); ++i)
            for (int j = 0; j < width; ++j) m.at(i, j) = rows[i][j];
        auto pivots = rref(m);
        std::vector<std::vector<typename D::Elem>> out;
        for (int i = 0; i < (int)pivots.size(); ++i) {
            std::vector<typename D::Elem> row(width);
            for (int j = 0; j < width; ++j) row[j] = m.at(i, j);
            out.push_back(std::move(row));
        }
        return std::make_pair(out, pivots);
    };

    for (int q = 0; q <= n; ++q) {
        CohomologyDegree<D> deg;
        deg.form_degree = q;
        deg.bound = spaces[q].bound;
        int dimq = spaces[q].dim();

        // kernel of the outgoing differential
        std::vector<std::vector<typename D::Elem>> kernel;
        if (q < n) {
            Matrix<D> m = dmat[q];
            for (auto& v : nullspace(m)) kernel.push_back(std::move(v));
        } else {
            for (int i = 0; i < dimq; ++i) {
                std::vector<typename D::Elem> e(dimq, dom.zero());
                e[i] = dom.one();
                kernel.push_back(std::move(e));
            }
        }

        // image of the incoming differential, echelonized
        std::vector<std::vector<typename D::Elem>> img_rows;
        std::vector<int> img_pivots;
        if (q > 0) {
            std::vector<std::vector<typename D::Elem>> cols;
            const Matrix<D>& m = dmat[q - 1];
            for (int c = 0; c < m.cols; ++c) {
                std::vector<typename D::Elem> col(dimq);
                bool nz = false;
                for (int r = 0; r < dimq; ++r) {
                    col[r] = m.at(r, c);
                    if (!dom.is_zero(col[r])) nz = true;
                }
                if (nz) cols.push_back(std::move(col));
            }
            std::tie(img_rows, img_pivots) = echelonize(std::move(cols), dimq);
        }

        // quotient basis: reduce kernel vectors mod image, echelonize survivors
        std::vector<std::vector<typename D::Elem>> reduced;
        for (auto& k : kernel) {
            reduce_by(k, img_rows, img_pivots);
            bool nz = false;
            for (const auto& c : k)
                if (!dom.is_zero(c)) { nz = true; break; }
            if (nz) reduced.push_back(std::move(k));
        }
        auto [h_rows, h_pivots] = echelonize(std::move(reduced), dimq);
        deg.dim = (int)h_rows.size();
        for (const auto& row : h_rows) deg.basis.push_back(spaces[q].from_coords(row));

        // multiplication by x_i^p on each class
        deg.x_action.assign(n, {});
        for (int i = 0; i < n; ++i) {
            MultiPoly<D> xp = poly_pow(MultiPoly<D>::variable(dom, n, i), p);
            for (int c = 0; c < deg.dim; ++c) {
                CohomologyClassAction<D> act;
                std::vector<MultiPoly<D>> mult;
                mult.reserve(deg.basis[c].size());
                for (const auto& f : deg.basis[c]) mult.push_back(xp * f);
                if (!spaces[q].fits(mult)) {
                    act.escapes = true;
                } else {
                    auto v = spaces[q].to_coords(mult);
                    reduce_by(v, img_rows, img_pivots);
                    act.coords = reduce_by(v, h_rows, h_pivots);
                    for (const auto& cc : v)
                        if (!dom.is_zero(cc)) throw AssertionError("class action fell outside the quotient basis");
                }
                deg.x_action[i].push_back(std::move(act));
            }
        }
        rep.h.push_back(std::move(deg));
    }
    return rep;
}

}  // namespace detail

template <class D>
DeRhamReport<D> derham_cohomology(const Connection<MultiPoly<D>>& C, int bound) {
    return detail::truncated_cohomology(C.theta, C.n, C.rank, bound, /*with_derivative=*/true);
}

template <class D>
DeRhamReport<D> higgs_cohomology(const HiggsBundle<MultiPoly<D>>& H, int bound) {
    return detail::truncated_cohomology(H.theta, H.n, H.rank, bound, /*with_derivative=*/false);
}

/// Dimensions at two bounds; stable means every degree agrees.
template <class D>
struct StabilityReport {
    std::vector<int> dims_low, dims_high;
    bool stable = false;
};

template <class D>
StabilityReport<D> derham_stability(const Connection<MultiPoly<D>>& C, int bound_low, int bound_high) {
    auto a = derham_cohomology(C, bound_low);
    auto b = derham_cohomology(C, bound_high);
    StabilityReport<D> r;
    for (const auto& d : a.h) r.dims_low.push_back(d.dim);
    for (const auto& d : b.h) r.dims_high.push_back(d.dim);
    r.stable = r.dims_low == r.dims_high;
    return r;
}

}  // namespace pweyl
