#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pweyl/parse.hpp"
#include "pweyl/poly.hpp"

using namespace pweyl;

TEST_CASE("prime field arithmetic") {
    FpDom f5(5);
    CHECK(f5.add(3, 4) == 2);
    CHECK(f5.sub(1, 3) == 3);
    CHECK(f5.mul(3, 4) == 2);
    CHECK(f5.inv(3) == 2);
    CHECK(f5.div(1, 2) == 3);
    CHECK(f5.pow(2, 4) == 1);
    CHECK(f5.from_int(-7) == 3);
    CHECK(f5.symmetric_lift(4) == -1);
    CHECK(f5.symmetric_lift(2) == 2);

    CHECK_THROWS_AS(FpDom(4), BadPrimeError);
    CHECK_THROWS_AS(FpDom(1), BadPrimeError);
    CHECK_THROWS_AS(FpDom(2), BadPrimeError);  // p = 2 out of scope
    CHECK_NOTHROW(FpDom(2147483647));          // largest prime below 2^31
    CHECK_THROWS_AS(FpDom(9), BadPrimeError);

    // binomials via Lucas: C(7,2) = 21 = 1 mod 5, C(10,5) = 252 = 2 mod 5
    CHECK(f5.binom(7, 2) == 1);
    CHECK(f5.binom(10, 5) == 2);
    CHECK(f5.binom(4, 5) == 0);
    // falling factorial 7*6*5 = 210 = 0 mod 5
    CHECK(f5.falling(7, 3) == 0);
    CHECK(f5.falling(4, 2) == f5.from_int(12));
}

TEST_CASE("rational arithmetic") {
    QDom q;
    auto half = q.div(q.one(), q.from_int(2));
    CHECK(q.eq(q.add(half, half), q.one()));
    CHECK(q.str(half) == "1/2");
    CHECK(q.str(q.from_int(-3)) == "-3");
    CHECK(q.eq(q.binom(10, 5), q.from_int(252)));
    CHECK(q.eq(q.falling(7, 3), q.from_int(210)));
    // binomials stay exact far beyond 64 bits
    auto big = q.binom(100, 50);
    CHECK(q.str(big) == "100891344545564193334812497256");
}

TEST_CASE("Z/p^2 arithmetic") {
    Zp2Dom z(5);
    CHECK(z.p2 == 25);
    CHECK(z.add(20, 10) == 5);
    CHECK(z.mul(7, 8) == 6);
    CHECK(z.mul(z.inv(7), 7) == 1);
    CHECK_THROWS_AS(z.inv(10), AssertionError);
    CHECK(z.from_int(-1) == 24);
}

static MultiPoly<FpDom> fp_poly(const std::string& s, std::uint32_t p, int n) {
    return parse_coordinate_poly(s, FpDom(p), n);
}

TEST_CASE("polynomial arithmetic") {
    auto a = fp_poly("x1 + x2", 5, 2);
    auto b = fp_poly("x1 - x2", 5, 2);
    CHECK(a * b == fp_poly("x1^2 - x2^2", 5, 2));
    CHECK(a - a == MultiPoly<FpDom>::zero(FpDom(5), 2));
    CHECK(poly_pow(a, 0) == fp_poly("1", 5, 2));

    // binomial theorem collapses mod p
    auto s = poly_pow(fp_poly("x1 + x2", 5, 2), 5);
    CHECK(s == fp_poly("x1^5 + x2^5", 5, 2));

    CHECK(fp_poly("2*x1", 5, 1).degree() == 1);
    CHECK(MultiPoly<FpDom>::zero(FpDom(5), 1).degree() == -1);
    CHECK(fp_poly("x1^3*x2 + x1", 5, 2).degree_in(0) == 3);

    CHECK_THROWS_AS(fp_poly("x1", 5, 1) + fp_poly("x1", 7, 1), DomainMismatchError);
}

TEST_CASE("derivative") {
    auto f = fp_poly("x1^3*x2", 5, 2);
    CHECK(poly_diff(f, 0) == fp_poly("3*x1^2*x2", 5, 2));
    CHECK(poly_diff(f, 1) == fp_poly("x1^3", 5, 2));
    // d/dx of x^5 vanishes mod 5
    CHECK(poly_diff(fp_poly("x1^5", 5, 1), 0).is_zero());

    // Leibniz rule on random inputs
    std::mt19937_64 rng(1001);
    FpDom f7(7);
    for (int trial = 0; trial < 100; ++trial) {
        MultiPoly<FpDom> u(f7, 2), v(f7, 2);
        for (int t = 0; t < 4; ++t) {
            Mono m{(std::uint16_t)(rng() % 4), (std::uint16_t)(rng() % 4)};
            u.add_term(m, (FpDom::Elem)(rng() % 7));
            Mono m2{(std::uint16_t)(rng() % 4), (std::uint16_t)(rng() % 4)};
            v.add_term(m2, (FpDom::Elem)(rng() % 7));
        }
        int i = (int)(rng() % 2);
        CHECK(poly_diff(u * v, i) == poly_diff(u, i) * v + u * poly_diff(v, i));
    }
}

TEST_CASE("substitution") {
    auto f = fp_poly("x1^2 + x2", 5, 2);
    std::vector<MultiPoly<FpDom>> imgs{fp_poly("x2", 5, 2), fp_poly("x1 + 1", 5, 2)};
    CHECK(substitute(f, imgs) == fp_poly("x2^2 + x1 + 1", 5, 2));
}

TEST_CASE("exact division") {
    auto f = fp_poly("x1^2 - x2^2", 5, 2);
    auto g = fp_poly("x1 + x2", 5, 2);
    auto q = poly_divexact(f, g);
    REQUIRE(q.has_value());
    CHECK(*q == fp_poly("x1 - x2", 5, 2));
    CHECK(!poly_divexact(fp_poly("x1^2 + 1", 5, 2), g).has_value());
}

TEST_CASE("reduction mod p") {
    QDom q;
    auto f = parse_coordinate_poly("1/3*x1", q, 1);
    CHECK(reduce_mod_p(f, 5) == fp_poly("2*x1", 5, 1));
    auto g = parse_coordinate_poly("1/5*x1", q, 1);
    CHECK_THROWS_AS(reduce_mod_p(g, 5), BadPrimeError);
}

TEST_CASE("lift and reduce between F_p and Z/p^2") {
    auto f = fp_poly("3*x1 + 4", 5, 1);
    auto l = lift_to_zp2(f);
    CHECK(reduce_zp2(l) == f);
    auto p_times = map_coeffs(l, l.dom, [&](Zp2Dom::Elem c) { return l.dom.mul(c, 5); });
    CHECK(divide_by_p(p_times) == f);
    CHECK_THROWS_AS(divide_by_p(l), AssertionError);
}

TEST_CASE("parser grammar") {
    FpDom f5(5);
    CHECK(fp_poly("x1^2 - 2*x1 + 1", 5, 1) == fp_poly("(x1 - 1)^2", 5, 1));
    CHECK(fp_poly("- x1", 5, 1) == -fp_poly("x1", 5, 1));
    CHECK(fp_poly("--x1", 5, 1) == fp_poly("x1", 5, 1));
    CHECK(fp_poly("1/2*x1", 5, 1) == fp_poly("3*x1", 5, 1));
    CHECK(fp_poly("2^3", 5, 1) == fp_poly("3", 5, 1));

    QDom q;
    auto f = parse_coordinate_poly("1/3*x1^3", q, 1);
    CHECK(q.eq(f.terms.begin()->second, BigRat(1, 3)));

    // twisted and lambda variable tables
    auto t = parse_twisted_poly<FpDom>("s1 - X1^2", f5, 1);
    CHECK(t.nvars == 2);
    auto lam = parse_lambda_poly<FpDom>("x1^4 + l^2", f5, 1);
    CHECK(lam.nvars == 2);
    CHECK(lam.degree_in(1) == 2);

    CHECK_THROWS_AS(fp_poly("x3", 5, 2), ParseError);
    CHECK_THROWS_AS(fp_poly("x1 +", 5, 1), ParseError);
    CHECK_THROWS_AS(fp_poly("x1 ^ 70000", 5, 1), ParseError);
    CHECK_THROWS_AS(fp_poly("1/0", 5, 1), ParseError);
    CHECK_THROWS_AS(fp_poly("x1 x2", 5, 2), ParseError);
    try {
        fp_poly("x1 + y1", 5, 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position == 5);
    }
}

TEST_CASE("printing round-trips through the parser") {
    std::mt19937_64 rng(2002);
    FpDom f7(7);
    for (int trial = 0; trial < 50; ++trial) {
        MultiPoly<FpDom> u(f7, 3);
        for (int t = 0; t < 5; ++t) {
            Mono m{(std::uint16_t)(rng() % 5), (std::uint16_t)(rng() % 5), (std::uint16_t)(rng() % 5)};
            u.add_term(m, (FpDom::Elem)(rng() % 7));
        }
        auto text = poly_to_string(u, coordinate_names(3));
        CHECK(parse_coordinate_poly(text, f7, 3) == u);
    }
    QDom q;
    auto f = parse_coordinate_poly("1/2*x1 - 2/3*x2 + 1", q, 2);
    CHECK(parse_coordinate_poly(poly_to_string(f, coordinate_names(2)), q, 2) == f);
    CHECK(poly_to_string(MultiPoly<QDom>::zero(q, 2), coordinate_names(2)) == "0");
}

TEST_CASE("exponent overflow is a hard error") {
    FpDom f5(5);
    auto x = MultiPoly<FpDom>::variable(f5, 1, 0, 60000);
    CHECK_THROWS_AS(x * x, ExponentOverflowError);
}
