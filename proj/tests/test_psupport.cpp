#include <catch_amalgamated.hpp>

#include "pweyl/psupport.hpp"
#include "suites.hpp"

using namespace pweyl;

namespace {

MultiPoly<FpDom> mp(const std::string& s, const FpDom& dom, int n) {
    return parse_coordinate_poly(s, dom, n);
}

// polynomial in the center coordinates X_i = x_i^p, s_i = d_i^p
MultiPoly<FpDom> tw(const std::string& s, const FpDom& dom, int n = 1) {
    return parse_twisted_poly(s, dom, n);
}

std::string ts(const MultiPoly<FpDom>& f, int n = 1) { return poly_to_string(f, twisted_names(n)); }

GroebnerBasis<FpDom> gbof(std::vector<MultiPoly<FpDom>> gens) {
    return buchberger(gens, GroebnerOptions{});
}

MatE<MultiPoly<FpDom>> mat(const FpDom& dom, int n,
                           const std::vector<std::vector<std::string>>& rows) {
    return matrix_from_strings(dom, n, coordinate_names(n), (int)rows.size(), rows);
}

}  // namespace

TEST_CASE("companion connection of a cyclic module") {
    FpDom F(7);
    auto w = parse_weyl("d1^2 - x1", F, 1);
    auto C = cyclic_connection(w);
    REQUIRE(C.rank == 2);
    REQUIRE(C.theta[0] == mat(F, 1, {{"0", "x1"}, {"1", "0"}}));

    REQUIRE_THROWS_AS(cyclic_connection(parse_weyl("x1*d1^2 + 1", F, 1)), NotMonicError);
    REQUIRE_THROWS_AS(cyclic_connection(parse_weyl("x1 + 1", F, 1)), AssertionError);

    // columns of theta agree with reduction of d^(j+1) modulo the operator
    std::mt19937_64 rng(0x51c0ffee);
    for (int trial = 0; trial < 12; ++trial) {
        int d = 1 + (int)(rng() % 3);
        WeylElement<FpDom> op(F, 1);
        op.add_term(Mono{0, (std::uint16_t)d}, F.one());
        for (int j = 0; j < d; ++j) {
            auto c = suites::random_poly(rng, F, 1, 2, 2);
            for (const auto& [m, cf] : c.terms) op.add_term(Mono{m[0], (std::uint16_t)j}, cf);
        }
        auto conn = cyclic_connection(op);
        for (int j = 0; j < d; ++j) {
            auto dj = WeylElement<FpDom>::dx(F, 1, 0);
            auto pow = WeylElement<FpDom>::one(F, 1);
            for (int k = 0; k <= j; ++k) pow = pow * dj;
            auto r = weyl_reduce_left(pow, op);
            std::vector<MultiPoly<FpDom>> cols((std::size_t)d, MultiPoly<FpDom>(F, 1));
            for (const auto& [m, c] : r.terms) {
                REQUIRE(m[1] < d);
                cols[m[1]].add_term(Mono{m[0]}, c);
            }
            for (int i = 0; i < d; ++i) REQUIRE(conn.theta[0].at(i, j) == cols[(std::size_t)i]);
        }
    }
}

TEST_CASE("center annihilator of pinned modules") {
    SECTION("Airy operator at p = 5") {
        FpDom F(5);
        auto C = cyclic_connection(parse_weyl("d1^2 - x1", F, 1));
        auto ann = annihilator_in_center(p_curvature(C));
        REQUIRE(ann.gb.gens.size() == 1);
        REQUIRE(ts(ann.gb.gens[0]) == "s1^2 + 4*X1");
    }
    SECTION("Airy operator at p = 3") {
        FpDom F(3);
        auto C = cyclic_connection(parse_weyl("d1^2 - x1", F, 1));
        auto ann = annihilator_in_center(p_curvature(C));
        REQUIRE(ann.gb.gens.size() == 1);
        REQUIRE(ts(ann.gb.gens[0]) == "s1^2 + 2*X1 + 2");
    }
    SECTION("rank one with polynomial potentials") {
        FpDom F(5);
        // d + d(x^3/3): horizontal sections scale like exp(-x^3/3)
        auto C = make_connection(1, 1, {mat(F, 1, {{"x1^2"}})});
        auto ann = annihilator_in_center(p_curvature(C));
        REQUIRE(ann.gb.gens.size() == 1);
        REQUIRE(ts(ann.gb.gens[0]) == "X1^2 + 4*s1");

        auto T = make_connection(1, 1, {mat(F, 1, {{"0"}})});
        auto annT = annihilator_in_center(p_curvature(T));
        REQUIRE(annT.gb.gens.size() == 1);
        REQUIRE(ts(annT.gb.gens[0]) == "s1");
        REQUIRE(annT.stable_bound == 2);
    }
    SECTION("essential singularity at the origin") {
        FpDom F(5);
        using L = LocalizedPoly<FpDom>;
        auto x = mp("x1", F, 1);
        // d + d(1/x) on the line with x inverted
        MatE<L> T(L::from_poly(MultiPoly<FpDom>::zero(F, 1), x), 1, 1);
        T.at(0, 0) = L(mp("4", F, 1), x, 2);
        auto C = make_connection(1, 1, {T});
        auto ann = annihilator_in_center(p_curvature(C));
        REQUIRE(ann.gb.gens.size() == 1);
        REQUIRE(ts(ann.gb.gens[0]) == "X1^2*s1 + 1");
    }
    SECTION("gauge invariance of the annihilator") {
        FpDom F(5);
        auto C = cyclic_connection(parse_weyl("d1^2 - x1 - 3", F, 1));
        using P = MultiPoly<FpDom>;
        auto g = MatE<P>::identity(P::zero(F, 1), 2);
        auto gi = g;
        g.at(0, 1) = mp("x1^2 + 2*x1", F, 1);
        gi.at(0, 1) = mp("4*x1^2 + 3*x1", F, 1);
        auto Cg = gauge_transform(C, g, gi);
        auto a0 = annihilator_in_center(p_curvature(C));
        auto a1 = annihilator_in_center(p_curvature(Cg));
        REQUIRE(a0.gb == a1.gb);
    }
    SECTION("cell budget is enforced") {
        FpDom F(5);
        auto C = cyclic_connection(parse_weyl("d1^2 - x1", F, 1));
        AnnihilatorOptions o;
        o.cell_budget = 4;
        REQUIRE_THROWS_AS(annihilator_in_center(p_curvature(C), o), BudgetExceededError);
    }
}

TEST_CASE("p-support dimension and lagrangian sampling") {
    SECTION("Airy support is a smooth lagrangian curve") {
        FpDom F(5);
        auto rep = p_support(cyclic_connection(parse_weyl("d1^2 - x1", F, 1)));
        REQUIRE(rep.dimension == 1);
        REQUIRE(rep.lagrangian.dimension_ok);
        REQUIRE(rep.lagrangian.samples >= 1);
        REQUIRE(rep.lagrangian.isotropic);
        REQUIRE(rep.lagrangian.sample_field_degree == 1);
    }
    SECTION("zero section on the plane") {
        FpDom F(5);
        auto z = mat(F, 2, {{"0"}});
        auto rep = p_support(make_connection(2, 1, {z, z}));
        REQUIRE(rep.dimension == 2);
        REQUIRE(rep.ann.gb.gens.size() == 2);
        REQUIRE(ts(rep.ann.gb.gens[0], 2) == "s1");
        REQUIRE(ts(rep.ann.gb.gens[1], 2) == "s2");
        REQUIRE(rep.lagrangian.dimension_ok);
        REQUIRE(rep.lagrangian.isotropic);
    }
    SECTION("coisotropic plane is rejected") {
        FpDom F(5);
        auto gb = gbof({tw("X1", F, 2), tw("s1", F, 2)});
        auto chk = is_lagrangian_candidate(gb, 2, 5);
        REQUIRE(chk.dimension_ok);
        REQUIRE(chk.samples >= 1);
        REQUIRE(!chk.isotropic);
    }
    SECTION("wrong dimension short-circuits") {
        FpDom F(5);
        auto gb = gbof({tw("X1", F, 1)});
        auto chk = is_lagrangian_candidate(gb, 1, 5);
        REQUIRE(chk.dimension_ok);  // a curve in the twisted cotangent of the line
        auto point = gbof({tw("X1", F, 1), tw("s1", F, 1)});
        auto chk0 = is_lagrangian_candidate(point, 1, 5);
        REQUIRE(!chk0.dimension_ok);
        REQUIRE(chk0.samples == 0);
    }
    SECTION("double line has no smooth point") {
        FpDom F(3);
        auto gb = gbof({tw("X1^2 + s1^2 + X1*s1", F, 1)});
        // (X - s)^2 over F_3; every point of the support is singular
        REQUIRE(krull_dimension(gb) == 1);
        REQUIRE_THROWS_AS(is_lagrangian_candidate(gb, 1, 3), NoSmoothSampleError);
    }
}

TEST_CASE("p-cycles of pinned modules") {
    SECTION("Airy at p = 5") {
        FpDom F(5);
        auto rep = p_cycle(cyclic_connection(parse_weyl("d1^2 - x1", F, 1)));
        REQUIRE(rep.p == 5);
        REQUIRE(rep.rank == 2);
        REQUIRE(rep.fiber_dimension == 10);
        REQUIRE(rep.components.size() == 1);
        REQUIRE(ts(rep.components[0].eliminant) == "s1^2 + 4*X1");
        REQUIRE(rep.components[0].irreducible_certified);
        REQUIRE(rep.components[0].fiber_points == 2);
        REQUIRE(rep.components[0].multiplicity == 1);
        REQUIRE(rep.mass_formula_ok);
    }
    SECTION("trivial bundle and a nilpotent cyclic module") {
        FpDom F(5);
        auto t = p_cycle(make_connection(1, 1, {mat(F, 1, {{"0"}})}));
        REQUIRE(t.components.size() == 1);
        REQUIRE(ts(t.components[0].eliminant) == "s1");
        REQUIRE(t.components[0].fiber_points == 1);
        REQUIRE(t.components[0].multiplicity == 1);

        // D/D d^2: cycle is the zero section with multiplicity two
        auto nil = p_cycle(cyclic_connection(parse_weyl("d1^2", F, 1)));
        REQUIRE(nil.components.size() == 1);
        REQUIRE(ts(nil.components[0].eliminant) == "s1");
        REQUIRE(nil.components[0].fiber_points == 1);
        REQUIRE(nil.components[0].multiplicity == 2);
        REQUIRE(nil.mass_formula_ok);
    }
    SECTION("split rank two") {
        FpDom F(5);
        // direct sum of exp(x) and exp(x^3/3)
        auto C = make_connection(1, 2, {mat(F, 1, {{"1", "0"}, {"0", "x1^2"}})});
        auto rep = p_cycle(C);
        REQUIRE(rep.components.size() == 2);
        REQUIRE(ts(rep.components[0].eliminant) == "s1 + 4");
        REQUIRE(rep.components[0].fiber_points == 1);
        REQUIRE(rep.components[0].multiplicity == 1);
        REQUIRE(ts(rep.components[1].eliminant) == "4*X1^2 + s1");
        REQUIRE(rep.components[1].fiber_points == 1);
        REQUIRE(rep.components[1].multiplicity == 1);
        REQUIRE(rep.mass_formula_ok);
        REQUIRE(ts(rep.ann.gb.gens[0]) == "X1^2*s1 + 4*X1^2 + 4*s1^2 + s1");
    }
    SECTION("essential singularity at the origin") {
        FpDom F(5);
        using L = LocalizedPoly<FpDom>;
        auto x = mp("x1", F, 1);
        MatE<L> T(L::from_poly(MultiPoly<FpDom>::zero(F, 1), x), 1, 1);
        T.at(0, 0) = L(mp("4", F, 1), x, 2);
        auto rep = p_cycle(make_connection(1, 1, {T}));
        REQUIRE(rep.components.size() == 1);
        REQUIRE(ts(rep.components[0].eliminant) == "X1^2*s1 + 1");
        REQUIRE(rep.components[0].fiber_points == 1);
        REQUIRE(rep.components[0].multiplicity == 1);
    }
    SECTION("inseparable support from a raw p-curvature") {
        FpDom F(5);
        // s acts as multiplication by x, so the support is the curve s^5 = X
        using P = MultiPoly<FpDom>;
        MatE<P> psi(P::zero(F, 1), 1, 1);
        psi.at(0, 0) = mp("x1", F, 1);
        PCurvature<P> pc;
        pc.p = 5;
        pc.psi.push_back(psi);
        auto rep = p_cycle_of(pc, 1);
        REQUIRE(rep.ann.stable_bound == 8);
        REQUIRE(rep.components.size() == 1);
        REQUIRE(ts(rep.components[0].eliminant) == "4*s1^5 + X1");
        REQUIRE(rep.components[0].fiber_points == 1);
        REQUIRE(rep.components[0].multiplicity == 1);
        REQUIRE(rep.mass_formula_ok);
    }
    SECTION("only the line is supported") {
        FpDom F(5);
        auto z = mat(F, 2, {{"0"}});
        REQUIRE_THROWS_AS(p_cycle(make_connection(2, 1, {z, z})), AssertionError);
    }
}

TEST_CASE("cycle mass formula on random cyclic modules") {
    REQUIRE(suites::suite_cycle_mass(6, 0x9e3779b9));
}
