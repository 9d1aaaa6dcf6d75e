#pragma once
// Word calculus for plane polynomial automorphisms: words in elementary
// generators (linear maps of determinant one, and shears along the first
// coordinate), their lifts to automorphisms of the Weyl algebra on the line,
// the induced action on the center in the twisted coordinates
// (X, s) = (x^p, d^p), and p-supports of the twisted cyclic modules D/D.A(d).

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "pweyl/connection.hpp"
#include "pweyl/error.hpp"
#include "pweyl/fp.hpp"
#include "pweyl/groebner.hpp"
#include "pweyl/poly.hpp"
#include "pweyl/psupport.hpp"
#include "pweyl/weyl.hpp"

namespace pweyl {

/// Elementary generator: a linear map (a b; c d) with ad - bc = 1, or the
/// shear (x, y) -> (x, y + f(x)).
struct AutGen {
    enum class Kind { linear, shear };
    Kind kind;
    std::array<FpDom::Elem, 4> m;  // row major a b c d (linear case)
    MultiPoly<FpDom> f;            // univariate shear polynomial

    static AutGen linear(const FpDom& dom, std::int64_t a, std::int64_t b, std::int64_t c,
                         std::int64_t d) {
        return AutGen{Kind::linear,
                      {dom.from_int(a), dom.from_int(b), dom.from_int(c), dom.from_int(d)},
                      MultiPoly<FpDom>(dom, 1)};
    }
    static AutGen shear(MultiPoly<FpDom> poly) {
        if (poly.nvars != 1) throw RelationViolatedError("shear polynomial must be univariate");
        return AutGen{Kind::shear, {0, 0, 0, 0}, std::move(poly)};
    }
};

/// Word in elementary generators; the first listed generator acts first.
struct AutWord {
    FpDom dom;
    std::vector<AutGen> gens;
};

/// Concatenation: v acts after w.
inline AutWord operator+(const AutWord& w, const AutWord& v) {
    if (w.dom != v.dom) throw DomainMismatchError("word concatenation: prime mismatch");
    AutWord r = w;
    r.gens.insert(r.gens.end(), v.gens.begin(), v.gens.end());
    return r;
}

/// Group inverse: reverse the word and invert every letter.
inline AutWord inverse(const AutWord& w) {
    AutWord r{w.dom, {}};
    r.gens.reserve(w.gens.size());
    for (auto it = w.gens.rbegin(); it != w.gens.rend(); ++it) {
        if (it->kind == AutGen::Kind::shear) {
            r.gens.push_back(AutGen::shear(-it->f));
        } else {
            AutGen g = *it;
            g.m = {it->m[3], w.dom.neg(it->m[1]), w.dom.neg(it->m[2]), it->m[0]};
            r.gens.push_back(std::move(g));
        }
    }
    return r;
}

/// Plane map (x, y) -> (P, Q); the same container carries maps of the twisted
/// plane in the coordinates (X, s).
struct PolyMap2 {
    MultiPoly<FpDom> P, Q;
};

inline bool operator==(const PolyMap2& a, const PolyMap2& b) { return a.P == b.P && a.Q == b.Q; }
inline bool operator!=(const PolyMap2& a, const PolyMap2& b) { return !(a == b); }

/// g after f as maps of points: (g . f)(pt) = g(f(pt)).
inline PolyMap2 compose(const PolyMap2& g, const PolyMap2& f) {
    std::vector<MultiPoly<FpDom>> im{f.P, f.Q};
    return {substitute(g.P, im), substitute(g.Q, im)};
}

/// Evaluate the word as a polynomial map of the plane.  The Jacobian
/// determinant of the result is checked to be exactly 1.
inline PolyMap2 word_to_polymap(const AutWord& w) {
    const FpDom& dom = w.dom;
    auto P = MultiPoly<FpDom>::variable(dom, 2, 0);
    auto Q = MultiPoly<FpDom>::variable(dom, 2, 1);
    auto scale = [&](FpDom::Elem c, const MultiPoly<FpDom>& h) {
        return MultiPoly<FpDom>::constant(dom, 2, c) * h;
    };
    for (const auto& g : w.gens) {
        if (g.kind == AutGen::Kind::shear) {
            Q = Q + substitute(g.f, {P});
        } else {
            auto np = scale(g.m[0], P) + scale(g.m[1], Q);
            auto nq = scale(g.m[2], P) + scale(g.m[3], Q);
            P = std::move(np);
            Q = std::move(nq);
        }
    }
    auto jac = poly_diff(P, 0) * poly_diff(Q, 1) - poly_diff(P, 1) * poly_diff(Q, 0);
    if (!(jac == MultiPoly<FpDom>::constant(dom, 2, dom.one())))
        throw RelationViolatedError("word_to_polymap: Jacobian determinant is not 1");
    return {P, Q};
}

/// Images (A(x), A(d)) of the coordinate and the derivation under the lifted
/// automorphism of the Weyl algebra on the line.  The defining relation
/// [A(d), A(x)] = 1 is re-checked after every letter.
inline std::pair<WeylElement<FpDom>, WeylElement<FpDom>> word_to_weyl_auto(const AutWord& w) {
    const FpDom& dom = w.dom;
    auto Ax = WeylElement<FpDom>::x(dom, 1, 0);
    auto Ad = WeylElement<FpDom>::dx(dom, 1, 0);
    auto check = [&](const WeylElement<FpDom>& X, const WeylElement<FpDom>& D) {
        auto c = weyl_commutator(D, X) - WeylElement<FpDom>::one(dom, 1);
        if (!c.is_zero())
            throw RelationViolatedError("word_to_weyl_auto: [A(d), A(x)] != 1 (malformed generator)");
    };
    check(Ax, Ad);
    for (const auto& g : w.gens) {
        if (g.kind == AutGen::Kind::shear) {
            Ad = Ad + weyl_eval_poly(g.f, {Ax});
        } else {
            auto nx = weyl_scal_mul(g.m[0], Ax) + weyl_scal_mul(g.m[1], Ad);
            auto nd = weyl_scal_mul(g.m[2], Ax) + weyl_scal_mul(g.m[3], Ad);
            Ax = std::move(nx);
            Ad = std::move(nd);
        }
        check(Ax, Ad);
    }
    return {Ax, Ad};
}

/// Apply the automorphism with the given coordinate images to a normal-ordered
/// element of the Weyl algebra on the line: x^a d^b -> A(x)^a A(d)^b.
inline WeylElement<FpDom> apply_weyl_images(
    const WeylElement<FpDom>& w,
    const std::pair<WeylElement<FpDom>, WeylElement<FpDom>>& images) {
    if (w.n != 1) throw AssertionError("apply_weyl_images: only implemented on the line");
    WeylElement<FpDom> out(w.dom, 1);
    for (const auto& [m, c] : w.terms) {
        auto t = WeylElement<FpDom>::scalar(w.dom, 1, c);
        if (m[0]) t = t * weyl_pow(images.first, m[0]);
        if (m[1]) t = t * weyl_pow(images.second, m[1]);
        out = out + t;
    }
    return out;
}

/// Induced map on the center: coordinates of A(x)^p and A(d)^p in (X, s).
/// Both p-th powers are certified central before their coordinates are read.
inline PolyMap2 center_action(const std::pair<WeylElement<FpDom>, WeylElement<FpDom>>& images) {
    const std::uint32_t p = images.first.dom.p;
    auto xp = weyl_pow(images.first, p);
    auto dp = weyl_pow(images.second, p);
    if (!is_central(xp) || !is_central(dp))
        throw NotCentralError("center_action: p-th power of an image is not central");
    return {center_coordinates(xp), center_coordinates(dp)};
}

/// Exact comparison of the center action against the plane map read in the
/// twisted coordinates: over F_p the coefficientwise Frobenius is the
/// identity, so the two polynomial pairs must agree literally.
struct FrobeniusTwistCheck {
    bool ok;
    PolyMap2 plane;   // word_to_polymap output, reread in (X, s)
    PolyMap2 center;  // center_action of the lifted automorphism
};

inline FrobeniusTwistCheck verify_frobenius_twist(const AutWord& w) {
    auto plane = word_to_polymap(w);
    auto cen = center_action(word_to_weyl_auto(w));
    return {plane == cen, std::move(plane), std::move(cen)};
}

namespace detail {

/// Reduced basis of the ideal of { (P(t,0), Q(t,0)) : t }, the image of the
/// x-axis, inside the twisted plane (X, s).
inline GroebnerBasis<FpDom> axis_image_ideal(const PolyMap2& map, const GroebnerOptions& gopt) {
    const FpDom& dom = map.P.dom;
    auto T = MultiPoly<FpDom>::variable(dom, 3, 0);
    auto Z = MultiPoly<FpDom>(dom, 3);
    auto X = MultiPoly<FpDom>::variable(dom, 3, 1);
    auto S = MultiPoly<FpDom>::variable(dom, 3, 2);
    std::vector<MultiPoly<FpDom>> gens{X - substitute(map.P, {T, Z}),
                                       S - substitute(map.Q, {T, Z})};
    return buchberger(eliminate(gens, {0}, gopt), gopt);
}

}  // namespace detail

/// p-support of the twisted cyclic module D/D.A(d), reported next to the
/// ideals of the x-axis image under the word and under its inverse.  The
/// support convention is not asserted, only measured: the two match flags
/// record which axis ideal (if either) coincides with the computed support.
struct TwistedSupportReport {
    GroebnerBasis<FpDom> support;        // center annihilator of D/D.A(d)
    GroebnerBasis<FpDom> axis_image;     // ideal of the x-axis image under the word
    GroebnerBasis<FpDom> axis_preimage;  // same for the inverse word
    bool matches_image = false;
    bool matches_preimage = false;
    int stable_bound = 0;  // degree bound at which the annihilator stabilized
};

inline TwistedSupportReport twisted_module_support(const AutWord& w,
                                                   const AnnihilatorOptions& opts = {}) {
    auto images = word_to_weyl_auto(w);
    const auto& Ad = images.second;
    const FpDom& dom = w.dom;

    TwistedSupportReport rep;
    if (Ad.order() >= 1) {
        auto ann = annihilator_in_center(p_curvature(cyclic_connection(Ad)), opts);
        rep.support = std::move(ann.gb);
        rep.stable_bound = ann.stable_bound;
    } else {
        // A(d) is a plain polynomial g(x), so D/D.g is a delta-type module
        // along the fibers over the roots of g.  Its Fourier transform
        // D/D.g(d) is an honest connection; compute the annihilator there and
        // carry it back.  On the center the Fourier inverse sends the element
        // h(x^p, d^p) to h(-d^p, x^p), i.e. substitutes (X, s) <- (-s, X).
        auto ann = annihilator_in_center(p_curvature(cyclic_connection(fourier(Ad))), opts);
        rep.stable_bound = ann.stable_bound;
        auto S = MultiPoly<FpDom>::variable(dom, 2, 1);
        auto X = MultiPoly<FpDom>::variable(dom, 2, 0);
        std::vector<MultiPoly<FpDom>> carried;
        carried.reserve(ann.gb.gens.size());
        for (const auto& g : ann.gb.gens) carried.push_back(substitute(g, {-S, X}));
        rep.support = buchberger(carried, opts.gb);
    }

    rep.axis_image = detail::axis_image_ideal(word_to_polymap(w), opts.gb);
    rep.axis_preimage = detail::axis_image_ideal(word_to_polymap(inverse(w)), opts.gb);
    rep.matches_image = ideal_equal(rep.support.gens, rep.axis_image.gens, opts.gb);
    rep.matches_preimage = ideal_equal(rep.support.gens, rep.axis_preimage.gens, opts.gb);
    return rep;
}

}  // namespace pweyl
