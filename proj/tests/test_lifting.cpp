#include <catch_amalgamated.hpp>

#include "pweyl/lifting.hpp"
#include "suites.hpp"

using namespace pweyl;
using suites::random_poly;

namespace {

using FPoly = MultiPoly<FpDom>;
using QPoly = MultiPoly<Zp2Dom>;
using FMat = MatE<FPoly>;
using FForm = PForm<FMat>;

FPoly cp(const std::string& s, const FpDom& dom, int n) {
    return parse_coordinate_poly(s, dom, n);
}

FMat fmat(const FpDom& dom, int n, const std::vector<std::vector<std::string>>& rows) {
    return matrix_from_strings(dom, n, coordinate_names(n), (int)rows.size(), rows);
}

FMat scalar_mat(const FPoly& f) {
    FMat m(FPoly::zero(f.dom, f.nvars), 1, 1);
    m.at(0, 0) = f;
    return m;
}

// rank-1 1-form f dx_1 + g dx_2 (or f dx_1 on the line)
FForm scalar_form(const std::vector<FPoly>& comps) {
    std::vector<FMat> c;
    for (const auto& f : comps) c.push_back(scalar_mat(f));
    return FForm((int)comps.size(), 1, std::move(c));
}

// the connection d + df, flat for any potential f
Connection<FPoly> potential_connection(const FPoly& f) {
    std::vector<FMat> th;
    for (int i = 0; i < f.nvars; ++i) th.push_back(scalar_mat(poly_diff(f, i)));
    return make_connection(f.nvars, 1, std::move(th));
}

// random flat rank-2 connection on the plane: a gauge transform of a
// y-independent diagonal pair (A(x1) dx1, 0) by I + (upper triangular)
Connection<FPoly> random_flat_rank2(std::mt19937_64& rng, const FpDom& dom) {
    FMat t1(FPoly::zero(dom, 2), 2, 2), z(FPoly::zero(dom, 2), 2, 2);
    Mono m0{0, 0}, m1{1, 0}, m2{2, 0};
    t1.at(0, 0).add_term(m1, dom.from_int(1));
    t1.at(1, 1).add_term(m2, dom.from_int(2));
    t1.at(1, 1).add_term(m0, dom.from_int(1));
    auto C = make_connection(2, 2, {t1, z});
    auto h = random_poly(rng, dom, 2, 3, 2);
    auto g = FMat::identity(FPoly::zero(dom, 2), 2), gi = g;
    g.at(0, 1) = h;
    gi.at(0, 1) = -h;
    auto Cg = gauge_transform(C, g, gi);
    REQUIRE(curvature_component(Cg.theta, 0, 1).is_zero());
    return Cg;
}

}  // namespace

TEST_CASE("lifts to Z/p^2: construction, reduction, exact curvature") {
    FpDom F(5);

    // d(x1*x2) lifted with an extra unit in one slot: curvature is exactly p
    auto C = connection_from_strings(F, 2, 1, {{{"x2"}}, {{"x1"}}});
    auto L0 = monomial_lift(C);
    REQUIRE(L0.flat);
    REQUIRE(lift_curvature(L0).is_zero());

    auto th = L0.theta;
    Zp2Dom Q(5);
    auto p_const = QPoly::constant(Q, 2, Q.from_int(5));
    th[1].at(0, 0) = th[1].at(0, 0) + p_const * lift_to_zp2(cp("x1", F, 2));
    auto L1 = make_lift(C, th);  // theta_2 = (1+p) x1 still reduces to x1
    REQUIRE_FALSE(L1.flat);
    auto curv = lift_curvature(L1);
    REQUIRE(curv.comp[0].at(0, 0) == p_const);
    REQUIRE(mat_divide_by_p(curv.comp[0]).at(0, 0) == cp("1", F, 2));

    // reduction mismatch and shape violations are rejected
    auto bad = L0.theta;
    bad[0].at(0, 0) = bad[0].at(0, 0) + QPoly::constant(Q, 2, Q.from_int(1));
    REQUIRE_THROWS_AS(make_lift(C, bad), AssertionError);
    Connection<FPoly> wide{1, 3, {FMat(FPoly::zero(F, 1), 3, 3)}};
    REQUIRE_THROWS_AS(monomial_lift(wide), AssertionError);

    // on the line the 2-form space vanishes, so every lift is flat
    std::mt19937_64 rng(11);
    for (int t = 0; t < 5; ++t) {
        FMat a(FPoly::zero(F, 1), 2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a.at(i, j) = random_poly(rng, F, 1, 3, 3);
        auto Cl = make_connection(1, 2, {a});
        REQUIRE(monomial_lift(Cl).flat);
    }
}

TEST_CASE("obstruction class on the plane, rank one") {
    FpDom F(5);

    // theta = x^4 y^5 dx: curvature of the monomial lift is -5 x^4 y^4, so
    // the class is -x^4 y^4 dx^dy, a pure Cartier coordinate: not liftable
    auto C = connection_from_strings(F, 2, 1, {{{"x1^4*x2^5"}}, {{"0"}}});
    auto oc = obstruction_class(C);
    REQUIRE_FALSE(oc.liftable);
    REQUIRE(oc.exact_decision);
    REQUIRE(oc.bound == 0);
    REQUIRE(oc.representative.comp[0].at(0, 0) == cp("4*x1^4*x2^4", F, 2));
    REQUIRE(oc.cartier_obstructions == std::vector<std::string>{"4*x1^4*x2^4"});
    REQUIRE_FALSE(oc.primitive.has_value());

    // theta = x^5 dy: curvature 5 x^4 has a termwise primitive
    auto C2 = connection_from_strings(F, 2, 1, {{{"0"}}, {{"x1^5"}}});
    auto oc2 = obstruction_class(C2);
    REQUIRE(oc2.liftable);
    REQUIRE(oc2.cartier_obstructions.empty());
    REQUIRE(oc2.flat_lift->flat);
    REQUIRE((end_d(C2.theta, *oc2.primitive) - oc2.representative).is_zero());

    // exact connections d + df lift flatly for every potential
    std::mt19937_64 rng(23);
    for (int t = 0; t < 10; ++t) {
        auto f = random_poly(rng, F, 2, 4, 6);
        auto ocf = obstruction_class(potential_connection(f));
        REQUIRE(ocf.liftable);
        REQUIRE(ocf.flat_lift->flat);
        REQUIRE((end_d(ocf.flat_lift->reduction.theta, *ocf.primitive) - ocf.representative).is_zero());
    }

    // mixed monomials sort cleanly into primitive and Cartier parts
    auto C3 = connection_from_strings(F, 2, 1, {{{"x1^4*x2^5 + 2*x1^9*x2^5 + x1^2*x2^5"}}, {{"0"}}});
    auto oc3 = obstruction_class(C3);
    REQUIRE_FALSE(oc3.liftable);
    REQUIRE(oc3.cartier_obstructions ==
            std::vector<std::string>{"4*x1^4*x2^4", "3*x1^9*x2^4"});

    // obstructions demand a flat reduction
    Connection<FPoly> Cbad{2, 1, {scalar_mat(cp("x2^2", F, 2)), scalar_mat(cp("0", F, 2))}};
    REQUIRE_THROWS_AS(obstruction_class(Cbad), FlatnessError);
}

TEST_CASE("obstruction class is independent of the lift up to exact forms") {
    FpDom F(5);
    std::mt19937_64 rng(37);

    // rank one: flat families c x^u y^(5b) dx + c' x^(5a) y^v dy
    for (int t = 0; t < 6; ++t) {
        FPoly t1(F, 2), t2(F, 2);
        Mono m1{(std::uint16_t)(rng() % 7), (std::uint16_t)(5 * (rng() % 2))};
        Mono m2{(std::uint16_t)(5 * (rng() % 2)), (std::uint16_t)(rng() % 7)};
        t1.add_term(m1, (FpDom::Elem)(1 + rng() % 4));
        t2.add_term(m2, (FpDom::Elem)(1 + rng() % 4));
        auto C = make_connection(2, 1, {scalar_mat(t1), scalar_mat(t2)});

        auto L = monomial_lift(C);
        auto gamma = scalar_form({random_poly(rng, F, 2, 3, 4), random_poly(rng, F, 2, 3, 4)});
        std::vector<MatE<QPoly>> th;
        for (int i = 0; i < 2; ++i) th.push_back(L.theta[(std::size_t)i] + mat_p_shift(gamma.comp[(std::size_t)i]));
        auto L2 = make_lift(C, std::move(th));

        auto w1 = obstruction_representative(L);
        auto w2 = obstruction_representative(L2);
        REQUIRE((w2 - w1 - end_d(C.theta, gamma)).is_zero());

        // the Cartier coordinates never move: d misses those monomials
        auto a = obstruction_from_lift(L), b = obstruction_from_lift(L2);
        REQUIRE(a.cartier_obstructions == b.cartier_obstructions);
        REQUIRE(a.liftable == b.liftable);
    }

    // rank two: gauge transforms of a y-independent connection
    for (int t = 0; t < 4; ++t) {
        auto C = random_flat_rank2(rng, F);
        auto L = monomial_lift(C);
        std::vector<FMat> gcomp;
        for (int i = 0; i < 2; ++i) {
            FMat g(FPoly::zero(F, 2), 2, 2);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) g.at(r, c) = random_poly(rng, F, 2, 2, 3);
            gcomp.push_back(g);
        }
        FForm gamma(2, 1, gcomp);
        std::vector<MatE<QPoly>> th;
        for (int i = 0; i < 2; ++i) th.push_back(L.theta[(std::size_t)i] + mat_p_shift(gamma.comp[(std::size_t)i]));
        auto L2 = make_lift(C, std::move(th));
        REQUIRE((obstruction_representative(L2) - obstruction_representative(L) - end_d(C.theta, gamma)).is_zero());
    }
}

TEST_CASE("obstruction class on the plane, rank two") {
    FpDom F(5);

    // integer-commuting data: the monomial lift is already flat
    auto C = connection_from_strings(
        F, 2, 2, {{{"x1", "1"}, {"0", "x1"}}, {{"0", "0"}, {"0", "0"}}});
    auto oc = obstruction_class(C);
    REQUIRE(oc.liftable);
    REQUIRE(oc.representative.is_zero());
    REQUIRE(oc.flat_lift->flat);

    // a Cartier-type class sitting in one diagonal entry decouples from the
    // commutator terms and stays obstructed at any truncation we try
    auto C2 = connection_from_strings(
        F, 2, 2, {{{"x1^4*x2^5", "0"}, {"0", "0"}}, {{"0", "0"}, {"0", "0"}}});
    auto oc2 = obstruction_class(C2, 8);
    REQUIRE_FALSE(oc2.liftable);
    REQUIRE_FALSE(oc2.exact_decision);  // honest: negative answers are bound-relative
    REQUIRE(oc2.bound == 8);

    // a liftable rank-2 class found by the truncated solver, verified flat
    auto C3 = connection_from_strings(
        F, 2, 2, {{{"0", "x2^5"}, {"0", "0"}}, {{"0", "0"}, {"0", "0"}}});
    auto oc3 = obstruction_class(C3, 6);
    REQUIRE(oc3.liftable);
    REQUIRE(oc3.exact_decision);
    REQUIRE(oc3.flat_lift->flat);
    REQUIRE((end_d(C3.theta, *oc3.primitive) - oc3.representative).is_zero());
}

TEST_CASE("torsor of lifts: action, transitivity, stabilizer") {
    FpDom F(5);

    // line, rank one: explicit action and difference recovery
    auto C = connection_from_strings(F, 1, 1, {{{"0"}}});
    auto L0 = monomial_lift(C);
    auto a1 = scalar_form({cp("1", F, 1)});
    auto a2 = scalar_form({cp("x1^4 + 2", F, 1)});
    auto L1 = act_on_lift(L0, a1);
    auto L2 = act_on_lift(L0, a2);
    REQUIRE(L1.flat);
    REQUIRE((lift_difference(L1, L0) - a1).is_zero());

    // transitivity: acting by the difference carries one lift to the other
    auto beta = lift_difference(L1, L2);
    auto moved = act_on_lift(L2, beta);
    for (int i = 0; i < 1; ++i) REQUIRE((moved.theta[(std::size_t)i] - L1.theta[(std::size_t)i]).is_zero());

    // plane: the action requires closed forms
    auto Cp = connection_from_strings(F, 2, 1, {{{"0"}}, {{"0"}}});
    auto Lp = monomial_lift(Cp);
    REQUIRE_THROWS_AS(act_on_lift(Lp, scalar_form({cp("x2", F, 2), cp("0", F, 2)})), NotClosedError);
    auto closed = scalar_form({cp("x2", F, 2), cp("x1", F, 2)});  // d(x1 x2)
    REQUIRE(act_on_lift(Lp, closed).flat);

    // different reductions never compare
    auto Cother = connection_from_strings(F, 1, 1, {{{"x1"}}});
    REQUIRE_THROWS_AS(lift_difference(L0, monomial_lift(Cother)), AssertionError);

    // stabilizer: acting by D(eta) lands in the same isomorphism class
    std::mt19937_64 rng(53);
    auto Cg = random_flat_rank2(rng, F);
    auto Lg = monomial_lift(Cg);
    FMat eta(FPoly::zero(F, 2), 2, 2);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) eta.at(r, c) = random_poly(rng, F, 2, 2, 1);
    auto deta = end_d(Cg.theta, FForm(2, 0, {eta}));
    auto Lmoved = act_on_lift(Lg, deta);
    auto iso = lifts_isomorphic(Lmoved, Lg, 6);
    REQUIRE(iso.isomorphic);
    REQUIRE((end_d(Cg.theta, FForm(2, 0, {*iso.witness})) - deta).is_zero());
}

TEST_CASE("gauge equivalence of lifts over Z/p^2") {
    FpDom F(5);
    auto C = connection_from_strings(F, 1, 1, {{{"0"}}});
    auto L0 = monomial_lift(C);

    // difference p dx integrates: witness eta = x1
    auto L1 = act_on_lift(L0, scalar_form({cp("1", F, 1)}));
    auto iso = lifts_isomorphic(L1, L0, 5);
    REQUIRE(iso.isomorphic);
    REQUIRE(iso.bound_certified);
    REQUIRE(iso.witness->at(0, 0) == cp("x1", F, 1));

    // difference p x^4 dx does not: x^5/5 fails mod 5, certified at bound 50
    auto L4 = act_on_lift(L0, scalar_form({cp("x1^4", F, 1)}));
    auto iso4 = lifts_isomorphic(L4, L0, 50);
    REQUIRE_FALSE(iso4.isomorphic);
    REQUIRE(iso4.bound == 50);
    REQUIRE(iso4.bound_certified);

    // the same difference integrates away from p = 5: eta = 3 x^5 at p = 7
    FpDom F7(7);
    auto C7 = connection_from_strings(F7, 1, 1, {{{"0"}}});
    auto M0 = monomial_lift(C7);
    auto M4 = act_on_lift(M0, scalar_form({cp("x1^4", F7, 1)}));
    auto iso7 = lifts_isomorphic(M4, M0, 10);
    REQUIRE(iso7.isomorphic);
    REQUIRE(iso7.witness->at(0, 0) == cp("3*x1^5", F7, 1));
    REQUIRE_FALSE(lifts_isomorphic(act_on_lift(M0, scalar_form({cp("x1^6", F7, 1)})), M0, 30).isomorphic);

    // rank two on the line: the witness must solve the twisted equation
    auto Cr = connection_from_strings(F, 1, 2, {{{"0", "x1"}, {"0", "0"}}});
    auto N0 = monomial_lift(Cr);
    FMat etag(FPoly::zero(F, 1), 2, 2);
    etag.at(1, 0) = cp("x1", F, 1);
    auto alpha = end_d(Cr.theta, PForm<FMat>(1, 0, {etag}));
    auto N1 = act_on_lift(N0, alpha);
    auto isor = lifts_isomorphic(N1, N0, 6);
    REQUIRE(isor.isomorphic);
    REQUIRE_FALSE(isor.bound_certified);  // rank-2 bounds are not certified
    REQUIRE((end_d(Cr.theta, PForm<FMat>(1, 0, {*isor.witness})) - alpha).is_zero());

    // verification path: a found witness moves one lift exactly onto the other
    auto back = act_on_lift(N0, end_d(Cr.theta, PForm<FMat>(1, 0, {*isor.witness})));
    for (int i = 0; i < 1; ++i) REQUIRE((back.theta[(std::size_t)i] - N1.theta[(std::size_t)i]).is_zero());
}
