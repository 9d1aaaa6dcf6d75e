#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pweyl/error.hpp"
#include "pweyl/monomial.hpp"
#include "pweyl/poly.hpp"

namespace pweyl {

/// Work limits for basis computations.  The budget counts elementary
/// reduction steps (one leading-term cancellation each); hitting the limit
/// throws BudgetExceededError rather than returning a partial answer.
struct GroebnerOptions {
    MonomialOrder order = MonomialOrder::grevlex();
    std::uint64_t budget = 1'000'000;
};

namespace detail {

/// Term list sorted descending in a fixed order; the working representation
/// inside the basis engine.
template <class D>
struct OrdPoly {
    std::vector<std::pair<Mono, typename D::Elem>> t;

    bool is_zero() const { return t.empty(); }
    const Mono& lm() const { return t.front().first; }
    const typename D::Elem& lc() const { return t.front().second; }
};

template <class D>
OrdPoly<D> to_ordered(const MultiPoly<D>& f, const MonomialOrder& ord) {
    OrdPoly<D> r;
    r.t.reserve(f.terms.size());
    for (auto& [m, c] : f.terms) r.t.emplace_back(m, c);
    std::sort(r.t.begin(), r.t.end(),
              [&](auto& x, auto& y) { return ord.cmp(x.first, y.first) > 0; });
    return r;
}

template <class D>
MultiPoly<D> to_multipoly(const OrdPoly<D>& f, D dom, int nvars) {
    MultiPoly<D> r(dom, nvars);
    for (auto& [m, c] : f.t) r.terms.emplace(m, c);
    return r;
}

/// r = f - c * m * g, merging the sorted term lists.
template <class D>
OrdPoly<D> sub_mul(const D& dom, const OrdPoly<D>& f, const typename D::Elem& c, const Mono& m,
                   const OrdPoly<D>& g, const MonomialOrder& ord) {
    OrdPoly<D> r;
    r.t.reserve(f.t.size() + g.t.size());
    std::size_t i = 0, j = 0;
    while (i < f.t.size() || j < g.t.size()) {
        if (j == g.t.size()) { r.t.push_back(f.t[i++]); continue; }
        Mono gm = mono_mul(g.t[j].first, m);
        auto gc = dom.neg(dom.mul(c, g.t[j].second));
        if (i == f.t.size()) { r.t.emplace_back(std::move(gm), gc); ++j; continue; }
        int cmp = ord.cmp(f.t[i].first, gm);
        if (cmp > 0) {
            r.t.push_back(f.t[i++]);
        } else if (cmp < 0) {
            r.t.emplace_back(std::move(gm), gc);
            ++j;
        } else {
            auto s = dom.add(f.t[i].second, gc);
            if (!dom.is_zero(s)) r.t.emplace_back(f.t[i].first, s);
            ++i; ++j;
        }
    }
    return r;
}

struct StepCounter {
    std::uint64_t limit;
    std::uint64_t used = 0;
    void tick() {
        if (++used > limit)
            throw BudgetExceededError("reduction budget exceeded (" + std::to_string(limit) + " steps)");
    }
};

/// Full normal form: every term of the result is reducible by no basis lead.
template <class D>
OrdPoly<D> reduce_full(const D& dom, OrdPoly<D> f, const std::vector<OrdPoly<D>>& gens,
                       const MonomialOrder& ord, StepCounter& steps) {
    OrdPoly<D> rem;
    while (!f.is_zero()) {
        bool reduced = false;
        for (auto& g : gens) {
            if (g.is_zero() || !mono_divides(g.lm(), f.lm())) continue;
            steps.tick();
            auto c = dom.div(f.lc(), g.lc());
            f = sub_mul(dom, f, c, mono_div(f.lm(), g.lm()), g, ord);
            reduced = true;
            break;
        }
        if (!reduced) {
            rem.t.push_back(f.t.front());
            f.t.erase(f.t.begin());
        }
    }
    return rem;
}

}  // namespace detail

/// Reduced Groebner basis: generators are monic, fully inter-reduced, and
/// sorted descending by leading monomial, so equal ideals (in the same order)
/// produce identical objects.
template <class D>
struct GroebnerBasis {
    D dom;
    int nvars = 0;
    MonomialOrder order;
    std::vector<MultiPoly<D>> gens;
    std::uint64_t steps_used = 0;

    bool contains_one() const {
        return gens.size() == 1 && gens[0].is_constant() && !gens[0].is_zero();
    }

    bool operator==(const GroebnerBasis& o) const {
        return nvars == o.nvars && order == o.order && gens == o.gens;
    }
};

/// S-polynomial in the given order (exposed for the closure property test).
template <class D>
MultiPoly<D> spoly(const MultiPoly<D>& f, const MultiPoly<D>& g, const MonomialOrder& ord) {
    check_compatible(f, g);
    if (f.is_zero() || g.is_zero()) throw AssertionError("spoly of zero polynomial");
    auto fo = detail::to_ordered(f, ord), go = detail::to_ordered(g, ord);
    Mono l = mono_lcm(fo.lm(), go.lm());
    auto& dom = f.dom;
    auto a = scal_mul(dom.inv(fo.lc()),
                      MultiPoly<D>::monomial(dom, f.nvars, mono_div(l, fo.lm()), dom.one()) * f);
    auto b = scal_mul(dom.inv(go.lc()),
                      MultiPoly<D>::monomial(dom, f.nvars, mono_div(l, go.lm()), dom.one()) * g);
    return a - b;
}

/// Buchberger's algorithm with the sugar selection strategy and both classical
/// pair criteria (coprime leads; chain criterion).
template <class D>
GroebnerBasis<D> buchberger(const std::vector<MultiPoly<D>>& input, const GroebnerOptions& opts = {}) {
    if (input.empty()) throw AssertionError("buchberger: empty generator list (use the zero ideal explicitly)");
    D dom = input[0].dom;
    int nvars = input[0].nvars;
    for (auto& f : input)
        if (f.dom != dom || f.nvars != nvars) throw DomainMismatchError("generators from different rings");

    const MonomialOrder& ord = opts.order;
    detail::StepCounter steps{opts.budget};

    std::vector<detail::OrdPoly<D>> basis;
    std::vector<std::uint32_t> sugar;

    struct Pair {
        std::uint32_t sug;
        std::uint32_t deg;
        Mono lcm;
        int i, j;
        bool operator<(const Pair& o) const {
            if (sug != o.sug) return sug < o.sug;
            if (deg != o.deg) return deg < o.deg;
            if (lcm != o.lcm) return lcm < o.lcm;
            if (i != o.i) return i < o.i;
            return j < o.j;
        }
    };
    std::set<Pair> queue;
    std::set<std::pair<int, int>> done;

    auto push_pairs = [&](int t) {
        for (int i = 0; i < t; ++i) {
            if (basis[(std::size_t)i].is_zero()) continue;
            Mono l = mono_lcm(basis[(std::size_t)i].lm(), basis[(std::size_t)t].lm());
            std::uint32_t d = total_degree(l);
            std::uint32_t si = sugar[(std::size_t)i] + d - total_degree(basis[(std::size_t)i].lm());
            std::uint32_t sj = sugar[(std::size_t)t] + d - total_degree(basis[(std::size_t)t].lm());
            queue.insert(Pair{std::max(si, sj), d, std::move(l), i, t});
        }
    };

    for (auto& f : input) {
        if (f.is_zero()) continue;
        auto of = detail::to_ordered(f, ord);
        basis.push_back(std::move(of));
        sugar.push_back((std::uint32_t)std::max<std::int64_t>(f.degree(), 0));
        push_pairs((int)basis.size() - 1);
    }

    while (!queue.empty()) {
        Pair pr = *queue.begin();
        queue.erase(queue.begin());
        done.insert({pr.i, pr.j});
        auto& gi = basis[(std::size_t)pr.i];
        auto& gj = basis[(std::size_t)pr.j];
        if (gi.is_zero() || gj.is_zero()) continue;
        // Buchberger's first criterion: coprime leading monomials reduce to zero.
        if (mono_coprime(gi.lm(), gj.lm())) continue;
        // Chain criterion: a third lead dividing the lcm, both side pairs settled.
        bool chained = false;
        for (int k = 0; k < (int)basis.size() && !chained; ++k) {
            if (k == pr.i || k == pr.j || basis[(std::size_t)k].is_zero()) continue;
            if (!mono_divides(basis[(std::size_t)k].lm(), pr.lcm)) continue;
            auto key = [&](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
            if (done.count(key(pr.i, k)) && done.count(key(pr.j, k))) chained = true;
        }
        if (chained) continue;

        // S-polynomial, then full reduction.
        auto ci = dom.inv(gi.lc());
        detail::OrdPoly<D> s;
        {
            detail::OrdPoly<D> lhs;
            Mono mi = mono_div(pr.lcm, gi.lm());
            for (auto& [m, c] : gi.t) lhs.t.emplace_back(mono_mul(m, mi), dom.mul(ci, c));
            auto cj = dom.div(dom.one(), gj.lc());
            s = detail::sub_mul(dom, lhs, cj, mono_div(pr.lcm, gj.lm()), gj, ord);
        }
        auto h = detail::reduce_full(dom, std::move(s), basis, ord, steps);
        if (h.is_zero()) continue;
        basis.push_back(std::move(h));
        sugar.push_back(pr.sug);
        push_pairs((int)basis.size() - 1);
    }

    // Minimalize: drop generators whose lead is divisible by another lead.
    std::vector<int> keep;
    for (int i = 0; i < (int)basis.size(); ++i) {
        if (basis[(std::size_t)i].is_zero()) continue;
        bool redundant = false;
        for (int j = 0; j < (int)basis.size() && !redundant; ++j) {
            if (i == j || basis[(std::size_t)j].is_zero()) continue;
            if (!mono_divides(basis[(std::size_t)j].lm(), basis[(std::size_t)i].lm())) continue;
            if (basis[(std::size_t)j].lm() == basis[(std::size_t)i].lm() && j > i) continue;
            redundant = true;
        }
        if (!redundant) keep.push_back(i);
    }

    // Inter-reduce the survivors and normalize to monic.
    std::vector<detail::OrdPoly<D>> mini;
    mini.reserve(keep.size());
    for (int i : keep) mini.push_back(basis[(std::size_t)i]);
    std::vector<detail::OrdPoly<D>> reduced;
    for (std::size_t i = 0; i < mini.size(); ++i) {
        std::vector<detail::OrdPoly<D>> others;
        for (std::size_t j = 0; j < mini.size(); ++j)
            if (j != i) others.push_back(mini[j]);
        auto h = detail::reduce_full(dom, mini[i], others, ord, steps);
        if (h.is_zero()) continue;
        auto inv = dom.inv(h.lc());
        for (auto& [m, c] : h.t) c = dom.mul(inv, c);
        reduced.push_back(std::move(h));
    }
    std::sort(reduced.begin(), reduced.end(),
              [&](auto& x, auto& y) { return ord.cmp(x.lm(), y.lm()) > 0; });

    GroebnerBasis<D> gb;
    gb.dom = dom;
    gb.nvars = nvars;
    gb.order = ord;
    gb.steps_used = steps.used;
    for (auto& g : reduced) gb.gens.push_back(detail::to_multipoly(g, dom, nvars));
    return gb;
}

/// Zero ideal in the given ring (empty reduced basis).
template <class D>
GroebnerBasis<D> zero_ideal(D dom, int nvars, MonomialOrder ord = MonomialOrder::grevlex()) {
    GroebnerBasis<D> gb;
    gb.dom = dom;
    gb.nvars = nvars;
    gb.order = ord;
    return gb;
}

template <class D>
MultiPoly<D> normal_form(const MultiPoly<D>& f, const GroebnerBasis<D>& gb,
                         std::uint64_t budget = 1'000'000) {
    if (f.dom != gb.dom || f.nvars != gb.nvars) throw DomainMismatchError("normal_form: ring mismatch");
    detail::StepCounter steps{budget};
    std::vector<detail::OrdPoly<D>> gens;
    gens.reserve(gb.gens.size());
    for (auto& g : gb.gens) gens.push_back(detail::to_ordered(g, gb.order));
    auto r = detail::reduce_full(gb.dom, detail::to_ordered(f, gb.order), gens, gb.order, steps);
    return detail::to_multipoly(r, gb.dom, gb.nvars);
}

template <class D>
bool ideal_member(const MultiPoly<D>& f, const GroebnerBasis<D>& gb) {
    return normal_form(f, gb).is_zero();
}

/// Append fresh variables to the ring of f (images keep their indices).
template <class D>
MultiPoly<D> extend_ring(const MultiPoly<D>& f, int extra) {
    MultiPoly<D> r(f.dom, f.nvars + extra);
    for (auto& [m, c] : f.terms) {
        Mono mm = m;
        mm.resize((std::size_t)(f.nvars + extra), 0);
        r.terms.emplace(std::move(mm), c);
    }
    return r;
}

/// f ∈ radical(I)?  Decided by the unit-ideal test on I + (1 - t f) with a
/// fresh variable t.
template <class D>
bool radical_member(const MultiPoly<D>& f, const std::vector<MultiPoly<D>>& ideal,
                    const GroebnerOptions& opts = {}) {
    if (f.is_zero()) {
        // 0 lies in every radical
        return true;
    }
    D dom = f.dom;
    int nv = f.nvars;
    std::vector<MultiPoly<D>> gens;
    for (auto& g : ideal) gens.push_back(extend_ring(g, 1));
    auto t = MultiPoly<D>::variable(dom, nv + 1, nv);
    auto one = MultiPoly<D>::constant(dom, nv + 1, dom.one());
    gens.push_back(one - t * extend_ring(f, 1));
    GroebnerOptions o = opts;
    o.order = MonomialOrder::grevlex();
    return buchberger(gens, o).contains_one();
}

/// Eliminate the variables listed in `elim` (indices into the ring of the
/// generators); returns generators of the elimination ideal in the remaining
/// variables, which keep their relative order.
template <class D>
std::vector<MultiPoly<D>> eliminate(const std::vector<MultiPoly<D>>& ideal,
                                    const std::vector<int>& elim, const GroebnerOptions& opts = {}) {
    if (ideal.empty()) return {};
    D dom = ideal[0].dom;
    int nv = ideal[0].nvars;
    std::vector<bool> is_elim((std::size_t)nv, false);
    for (int i : elim) {
        if (i < 0 || i >= nv) throw AssertionError("eliminate: bad variable index");
        is_elim[(std::size_t)i] = true;
    }
    // permutation: eliminated block first, survivors after, both in ring order
    std::vector<int> to_new((std::size_t)nv, -1), survivors;
    int pos = 0;
    for (int i = 0; i < nv; ++i)
        if (is_elim[(std::size_t)i]) to_new[(std::size_t)i] = pos++;
    int block = pos;
    for (int i = 0; i < nv; ++i)
        if (!is_elim[(std::size_t)i]) {
            to_new[(std::size_t)i] = pos++;
            survivors.push_back(i);
        }
    std::vector<MultiPoly<D>> permuted;
    for (auto& g : ideal) {
        MultiPoly<D> h(dom, nv);
        for (auto& [m, c] : g.terms) {
            Mono mm((std::size_t)nv, 0);
            for (int i = 0; i < nv; ++i) mm[(std::size_t)to_new[(std::size_t)i]] = m[(std::size_t)i];
            h.terms.emplace(std::move(mm), c);
        }
        permuted.push_back(std::move(h));
    }
    GroebnerOptions o = opts;
    o.order = MonomialOrder::block_elim(block);
    auto gb = buchberger(permuted, o);
    std::vector<MultiPoly<D>> out;
    for (auto& g : gb.gens) {
        bool pure = true;
        for (auto& [m, c] : g.terms)
            for (int i = 0; i < block && pure; ++i)
                if (m[(std::size_t)i]) pure = false;
        if (!pure) continue;
        MultiPoly<D> h(dom, nv - block);
        for (auto& [m, c] : g.terms) {
            Mono mm((std::size_t)(nv - block), 0);
            for (int i = block; i < nv; ++i) mm[(std::size_t)(i - block)] = m[(std::size_t)i];
            h.terms.emplace(std::move(mm), c);
        }
        out.push_back(std::move(h));
    }
    return out;
}

/// Krull dimension of the quotient ring by the ideal, computed from the
/// leading-term ideal: the dimension is the size of the largest variable set
/// that meets no leading monomial's support.  Returns -1 for the unit ideal.
template <class D>
int krull_dimension(const GroebnerBasis<D>& gb) {
    if (gb.contains_one()) return -1;
    if (gb.nvars > 24) throw AssertionError("krull_dimension: too many variables");
    std::vector<std::uint32_t> supports;
    MonomialOrder ord = gb.order;
    for (auto& g : gb.gens) {
        auto og = detail::to_ordered(g, ord);
        std::uint32_t mask = 0;
        for (int i = 0; i < gb.nvars; ++i)
            if (og.lm()[(std::size_t)i]) mask |= 1u << i;
        supports.push_back(mask);
    }
    int best = 0;
    for (std::uint32_t s = 0; s < (1u << gb.nvars); ++s) {
        bool independent = true;
        for (auto m : supports)
            if ((m & ~s) == 0) { independent = false; break; }
        if (independent) best = std::max(best, __builtin_popcount(s));
    }
    return best;
}

/// Equality of ideals via their (unique) reduced grevlex bases.
template <class D>
bool ideal_equal(const std::vector<MultiPoly<D>>& a, const std::vector<MultiPoly<D>>& b,
                 const GroebnerOptions& opts = {}) {
    bool az = a.empty(), bz = b.empty();
    if (!az) az = std::all_of(a.begin(), a.end(), [](auto& f) { return f.is_zero(); });
    if (!bz) bz = std::all_of(b.begin(), b.end(), [](auto& f) { return f.is_zero(); });
    if (az || bz) return az == bz;
    GroebnerOptions o = opts;
    o.order = MonomialOrder::grevlex();
    return buchberger(a, o).gens == buchberger(b, o).gens;
}

}  // namespace pweyl
