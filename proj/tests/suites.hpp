#pragma once

// Randomized property suites shared by the unit tests and the acceptance
// runner.  Each suite returns true when every instance satisfied the
// property; failures print a short diagnostic to stderr.

#include <cstdint>
#include <cstdio>
#include <random>
#include <vector>

#include "pweyl/connection.hpp"
#include "pweyl/groebner.hpp"
#include "pweyl/poly.hpp"
#include "pweyl/psupport.hpp"
#include "pweyl/weyl.hpp"

namespace suites {

using namespace pweyl;

inline MultiPoly<FpDom> random_poly(std::mt19937_64& rng, FpDom dom, int nvars, int max_terms,
                                    int max_exp) {
    MultiPoly<FpDom> f(dom, nvars);
    int t = 1 + (int)(rng() % (std::uint64_t)max_terms);
    for (int i = 0; i < t; ++i) {
        Mono m((std::size_t)nvars);
        for (int v = 0; v < nvars; ++v) m[(std::size_t)v] = (std::uint16_t)(rng() % (std::uint64_t)(max_exp + 1));
        f.add_term(m, (FpDom::Elem)(rng() % dom.p));
    }
    return f;
}

/// Every S-polynomial of a computed basis reduces to zero, and every input
/// generator lies in the ideal of the basis.
inline bool suite_groebner_closure(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::uint32_t primes[] = {5, 7, 11, 13};
    for (int inst = 0; inst < instances; ++inst) {
        FpDom dom(primes[rng() % 4]);
        int nvars = 2 + (int)(rng() % 2);
        int ngens = 2 + (int)(rng() % 2);
        std::vector<MultiPoly<FpDom>> gens;
        for (int i = 0; i < ngens; ++i) gens.push_back(random_poly(rng, dom, nvars, 3, 3));
        bool all_zero = true;
        for (auto& g : gens) all_zero = all_zero && g.is_zero();
        if (all_zero) continue;
        MonomialOrder ord = (rng() & 1) ? MonomialOrder::grevlex() : MonomialOrder::lex();
        GroebnerOptions opts;
        opts.order = ord;
        GroebnerBasis<FpDom> gb;
        try {
            gb = buchberger(gens, opts);
        } catch (const BudgetExceededError&) {
            continue;  // budget exhaustion is a legal outcome, not a property failure
        }
        for (std::size_t i = 0; i < gb.gens.size(); ++i)
            for (std::size_t j = i + 1; j < gb.gens.size(); ++j) {
                auto s = spoly(gb.gens[i], gb.gens[j], ord);
                if (!normal_form(s, gb).is_zero()) {
                    std::fprintf(stderr, "spoly closure failed at instance %d\n", inst);
                    return false;
                }
            }
        for (auto& g : gens)
            if (!normal_form(g, gb).is_zero()) {
                std::fprintf(stderr, "input membership failed at instance %d\n", inst);
                return false;
            }
    }
    return true;
}

inline WeylElement<FpDom> random_weyl(std::mt19937_64& rng, FpDom dom, int n, int max_terms,
                                      int max_exp) {
    WeylElement<FpDom> w(dom, n);
    int t = 1 + (int)(rng() % (std::uint64_t)max_terms);
    for (int i = 0; i < t; ++i) {
        Mono m((std::size_t)(2 * n));
        for (int v = 0; v < 2 * n; ++v) m[(std::size_t)v] = (std::uint16_t)(rng() % (std::uint64_t)(max_exp + 1));
        w.add_term(m, (FpDom::Elem)(rng() % dom.p));
    }
    return w;
}

/// Associativity and distributivity of the normal-ordered product, plus the
/// defining relations [d_i, x_j] = delta_ij, [x_i, x_j] = [d_i, d_j] = 0.
inline bool suite_weyl_algebra(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::uint32_t primes[] = {5, 7, 11, 13};
    for (int inst = 0; inst < instances; ++inst) {
        FpDom dom(primes[rng() % 4]);
        int n = 1 + (int)(rng() % 2);
        auto a = random_weyl(rng, dom, n, 4, 4);
        auto b = random_weyl(rng, dom, n, 4, 4);
        auto c = random_weyl(rng, dom, n, 4, 4);
        if ((a * b) * c != a * (b * c)) {
            std::fprintf(stderr, "associativity failed at instance %d\n", inst);
            return false;
        }
        if (a * (b + c) != a * b + a * c || (a + b) * c != a * c + b * c) {
            std::fprintf(stderr, "distributivity failed at instance %d\n", inst);
            return false;
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto xi = WeylElement<FpDom>::x(dom, n, i);
                auto xj = WeylElement<FpDom>::x(dom, n, j);
                auto di = WeylElement<FpDom>::dx(dom, n, i);
                auto dj = WeylElement<FpDom>::dx(dom, n, j);
                auto delta = i == j ? WeylElement<FpDom>::one(dom, n) : WeylElement<FpDom>::zero(dom, n);
                if (weyl_commutator(di, xj) != delta || !weyl_commutator(xi, xj).is_zero() ||
                    !weyl_commutator(di, dj).is_zero()) {
                    std::fprintf(stderr, "defining relations failed at instance %d\n", inst);
                    return false;
                }
            }
    }
    return true;
}

/// p-curvature properties on random instances: the closed form for rank one
/// (g^p plus the (p-1)-st derivative of g per direction), O-linearity of the
/// p-fold iterate, gauge covariance Psi' = g Psi g^-1 under unipotent gauges,
/// and the lambda-deformation endpoints (matrix p-th power at lambda = 0,
/// the ordinary p-curvature at lambda = 1).  Horizontality and pairwise
/// commutation are asserted inside p_curvature itself on every instance.
inline bool suite_pcurvature(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::uint32_t primes[] = {3, 5, 7};
    for (int inst = 0; inst < instances; ++inst) {
        FpDom dom(primes[rng() % 3]);
        int n = 1 + (int)(rng() % 2);
        using P = MultiPoly<FpDom>;

        // rank one: connection d + df for a random potential f
        auto f = random_poly(rng, dom, n, 4, 3);
        std::vector<MatE<P>> th;
        for (int i = 0; i < n; ++i) {
            MatE<P> t(P::zero(dom, n), 1, 1);
            t.at(0, 0) = poly_diff(f, i);
            th.push_back(std::move(t));
        }
        auto C = make_connection(n, 1, th);
        auto Psi = p_curvature(C);
        for (int i = 0; i < n; ++i) {
            auto g = poly_diff(f, i);
            auto expect = poly_pow(g, dom.p);
            auto der = g;
            for (std::uint32_t k = 0; k + 1 < dom.p; ++k) der = poly_diff(der, i);
            expect = expect + der;
            if (!(Psi.psi[i].at(0, 0) == expect)) {
                std::fprintf(stderr, "rank-one p-curvature closed form failed at instance %d\n", inst);
                return false;
            }
        }

        // O-linearity: the p-fold iterate applied to s * 1 equals s times the
        // iterate of 1, for an arbitrary polynomial s
        {
            int i = (int)(rng() % (std::uint64_t)n);
            auto s = random_poly(rng, dom, n, 3, 2);
            auto iterate = [&](P v) {
                for (std::uint32_t k = 0; k < dom.p; ++k) v = poly_diff(v, i) + th[i].at(0, 0) * v;
                return v;
            };
            auto lhs = iterate(s);
            auto rhs = s * Psi.psi[i].at(0, 0);
            if (!(lhs == rhs)) {
                std::fprintf(stderr, "O-linearity failed at instance %d\n", inst);
                return false;
            }
        }

        // rank two in one variable: gauge covariance under a unipotent gauge
        {
            FpDom d2(primes[rng() % 3]);
            MatE<P> T(P::zero(d2, 1), 2, 2);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) T.at(a, b) = random_poly(rng, d2, 1, 2, 2);
            auto C2 = make_connection(1, 2, {T});
            auto P2 = p_curvature(C2);
            auto h = random_poly(rng, d2, 1, 2, 2);
            MatE<P> g = MatE<P>::identity(P::zero(d2, 1), 2);
            MatE<P> gi = g;
            g.at(0, 1) = h;
            gi.at(0, 1) = -h;
            auto C2g = gauge_transform(C2, g, gi);
            auto P2g = p_curvature(C2g);
            if (!(P2g.psi[0] == g * P2.psi[0] * gi)) {
                std::fprintf(stderr, "gauge covariance failed at instance %d\n", inst);
                return false;
            }
        }

        // lambda deformation of the rank-one connection, one variable
        {
            FpDom d3(primes[rng() % 3]);
            auto g = random_poly(rng, d3, 1, 3, 3);
            MatE<MultiPoly<FpDom>> T(MultiPoly<FpDom>::zero(d3, 1), 1, 1);
            T.at(0, 0) = g;
            auto LC = make_lambda_connection(1, 1, {embed_with_lambda(T)});
            auto PL = p_curvature_lambda(LC);
            auto at0 = specialize_lambda(PL.psi[0], d3.zero());
            auto gp = mat_pow_e(T, d3.p);
            if (!(at0 == gp)) {
                std::fprintf(stderr, "lambda=0 endpoint failed at instance %d\n", inst);
                return false;
            }
            auto at1 = specialize_lambda(PL.psi[0], d3.one());
            auto CP = p_curvature(make_connection(1, 1, {T}));
            if (!(at1 == CP.psi[0])) {
                std::fprintf(stderr, "lambda=1 endpoint failed at instance %d\n", inst);
                return false;
            }
        }
    }
    return true;
}

/// Cycle mass on random cyclic modules D/Dw with constant leading term: the
/// component multiplicities weighted by fiber degree add up to the order of
/// the operator, every component carries positive multiplicity, and the
/// support ideal of the report contains each component eliminant.
inline bool suite_cycle_mass(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::uint32_t primes[] = {3, 5};
    for (int inst = 0; inst < instances; ++inst) {
        FpDom dom(primes[rng() % 2]);
        int d = 1 + (int)(rng() % 3);
        WeylElement<FpDom> w(dom, 1);
        w.add_term(Mono{0, (std::uint16_t)d}, dom.one());
        for (int j = 0; j < d; ++j) {
            auto c = random_poly(rng, dom, 1, 2, 2);
            for (const auto& [m, cf] : c.terms) w.add_term(Mono{m[0], (std::uint16_t)j}, cf);
        }
        auto rep = p_cycle(cyclic_connection(w));
        if (!rep.mass_formula_ok) {
            std::fprintf(stderr, "mass formula flag unset at instance %d\n", inst);
            return false;
        }
        int mass = 0;
        auto prod = MultiPoly<FpDom>::constant(dom, 2, dom.one());
        for (const auto& c : rep.components) {
            if (c.multiplicity < 1 || c.fiber_points < 1) {
                std::fprintf(stderr, "degenerate component at instance %d\n", inst);
                return false;
            }
            mass += c.multiplicity * c.fiber_points;
            prod = prod * c.eliminant;
        }
        // the reduced support is exactly the union of the components
        bool same = radical_member(prod, rep.ann.gb.gens);
        for (const auto& g : rep.ann.gb.gens)
            same = same && radical_member(g, std::vector<MultiPoly<FpDom>>{prod});
        if (!same) {
            std::fprintf(stderr, "support and components disagree at instance %d\n", inst);
            return false;
        }
        if (mass != d || rep.rank != d || rep.fiber_dimension != d * (int)dom.p) {
            std::fprintf(stderr, "mass mismatch at instance %d\n", inst);
            return false;
        }
    }
    return true;
}

}  // namespace suites
