// End-to-end acceptance gate.  Each criterion prints one verdict line and a
// short note; wall-clock limits are part of the verdict.  Exact arithmetic
// throughout: every comparison below is on-the-nose equality of polynomials,
// ideals, or cycle data.  The final summary line states the expected overall
// outcome, including the one known mathematical failure (see criterion 7).

#include "pweyl/dixmier.hpp"
#include "pweyl/functors.hpp"
#include "pweyl/lifting.hpp"
#include "suites.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace pweyl;
using suites::random_poly;

namespace {

using FPoly = MultiPoly<FpDom>;
using FMat = MatE<FPoly>;
using FForm = PForm<FMat>;
using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

FPoly tw(const std::string& s, const FpDom& dom) { return parse_twisted_poly(s, dom, 1); }

FPoly cp(const std::string& s, const FpDom& dom, int n) { return parse_coordinate_poly(s, dom, n); }

Connection<FPoly> cyclic(const std::string& op, const FpDom& dom) {
    return cyclic_connection(parse_weyl(op, dom, 1));
}

bool ideal_is(const std::vector<FPoly>& gens, const FPoly& want) {
    GroebnerOptions gopt;
    return ideal_equal(gens, std::vector<FPoly>{want}, gopt);
}

FMat scalar_mat(const FPoly& f) {
    FMat m(FPoly::zero(f.dom, f.nvars), 1, 1);
    m.at(0, 0) = f;
    return m;
}

FForm scalar_form(const std::vector<FPoly>& comps) {
    std::vector<FMat> c;
    for (const auto& f : comps) c.push_back(scalar_mat(f));
    return FForm((int)comps.size(), 1, std::move(c));
}

Connection<FPoly> potential_connection(const FPoly& f) {
    std::vector<FMat> th;
    for (int i = 0; i < f.nvars; ++i) th.push_back(scalar_mat(poly_diff(f, i)));
    return make_connection(f.nvars, 1, std::move(th));
}

// multiset equality on (eliminant, multiplicity) pairs
bool same_components(const std::vector<CycleComponent>& a, const std::vector<CycleComponent>& b) {
    auto key = [](const CycleComponent& c) {
        return poly_to_string(c.eliminant, twisted_names(1)) + " ^ " + std::to_string(c.multiplicity);
    };
    std::multiset<std::string> ka, kb;
    for (const auto& c : a) ka.insert(key(c));
    for (const auto& c : b) kb.insert(key(c));
    return ka == kb;
}

// Prime-independent rendering of a cycle: coefficients mapped to the
// symmetric residues (-p/2, p/2], components sorted.  Two primes give the
// same key exactly when the components "read the same".
std::string symmetric_cycle_key(const std::vector<CycleComponent>& cs) {
    std::vector<std::string> parts;
    for (const auto& c : cs) {
        std::ostringstream os;
        for (const auto& [m, cf] : c.eliminant.terms) {
            std::int64_t v = (std::int64_t)cf;
            if (v > (std::int64_t)c.eliminant.dom.p / 2) v -= (std::int64_t)c.eliminant.dom.p;
            os << "[";
            for (auto e : m) os << (int)e << " ";
            os << "]*" << v << ";";
        }
        os << " ^ " << c.multiplicity;
        parts.push_back(os.str());
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& s : parts) out += s + " | ";
    return out;
}

std::string word_label(const AutWord& w) {
    std::string s = "[";
    for (std::size_t i = 0; i < w.gens.size(); ++i) {
        if (i) s += ", ";
        const auto& g = w.gens[i];
        if (g.kind == AutGen::Kind::shear)
            s += "shear(" + poly_to_string(g.f, {"x"}) + ")";
        else
            s += "rot";
    }
    return s + "]";
}

struct Verdict {
    bool pass = true;
    std::string note;
};

void fail(Verdict& v, const std::string& why) {
    if (v.pass) v.note = why;
    v.pass = false;
}

// 1. exponential module e^{x^3/3}: support is the parabola s = X^2 with
//    multiplicity one, identically across four primes, under 1 s each
Verdict crit_exponential() {
    Verdict v;
    std::vector<std::string> keys;
    for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
        FpDom F(p);
        auto t0 = Clock::now();
        auto rep = p_cycle(cyclic("d1 - x1^2", F));
        double dt = since(t0);
        if (dt >= 1.0) fail(v, "p=" + std::to_string(p) + " took " + std::to_string(dt) + "s");
        if (rep.components.size() != 1 || rep.components[0].multiplicity != 1)
            fail(v, "p=" + std::to_string(p) + ": component list is not a single multiplicity-1 piece");
        else if (!ideal_is({rep.components[0].eliminant}, tw("s1 - X1^2", F)))
            fail(v, "p=" + std::to_string(p) + ": eliminant is not s1 - X1^2");
        keys.push_back(symmetric_cycle_key(rep.components));
    }
    for (const auto& k : keys)
        if (k != keys[0]) fail(v, "cycle reads differently across primes");
    if (v.pass) v.note = "cycle [(s1 - X1^2), 1] at p in {5,7,11,13}, constant across primes";
    return v;
}

// 2. Airy operator d^2 - x: support s^2 = X with multiplicity one at three
//    primes; the p=5 curvature matrix and its square pinned exactly; the
//    bad-prime p=3 ideal recorded as a regression
Verdict crit_airy() {
    Verdict v;
    for (std::uint32_t p : {5u, 7u, 11u}) {
        FpDom F(p);
        auto rep = p_cycle(cyclic("d1^2 - x1", F));
        bool ok = rep.components.size() == 1 && rep.components[0].multiplicity == 1 &&
                  ideal_is({rep.components[0].eliminant}, tw("s1^2 - X1", F)) &&
                  ideal_is(rep.ann.gb.gens, tw("s1^2 - X1", F));
        if (!ok) fail(v, "p=" + std::to_string(p) + ": support is not [(s1^2 - X1), 1]");
    }
    {
        FpDom F(5);
        auto pc = p_curvature(cyclic("d1^2 - x1", F));
        auto want = matrix_from_strings(F, 1, coordinate_names(1), 2,
                                        {{"4*x1", "x1^3 + 4"}, {"x1^2", "x1"}});
        if (!(pc.psi[0] == want)) fail(v, "p=5 curvature matrix differs from [[4x, x^3+4],[x^2, x]]");
        auto sq = pc.psi[0] * pc.psi[0];
        auto diag = FMat::identity(FPoly::zero(F, 1), 2);
        diag.at(0, 0) = cp("x1^5", F, 1);
        diag.at(1, 1) = cp("x1^5", F, 1);
        if (!(sq == diag)) fail(v, "p=5 curvature squared is not x^5 times the identity");
    }
    {
        FpDom F3(3);
        auto rep = p_cycle(cyclic("d1^2 - x1", F3));
        if (!ideal_is(rep.ann.gb.gens, tw("s1^2 - X1 - 1", F3)))
            fail(v, "p=3 bad-prime ideal is not s1^2 - X1 - 1");
    }
    if (v.pass) v.note = "[(s1^2 - X1), 1] at p in {5,7,11}; psi and psi^2 pinned at p=5; p=3 shift regression holds";
    return v;
}

// 3. Fourier transform: the operator picture and the cycle picture rotate
//    together, (X, s) -> (s, -X)
Verdict crit_fourier() {
    Verdict v;
    FpDom F(5);
    if (!(fourier(parse_weyl("d1^2 - x1", F, 1)) == parse_weyl("x1^2 - d1", F, 1)))
        fail(v, "fourier(d1^2 - x1) != x1^2 - d1");
    auto airy = p_cycle(cyclic("d1^2 - x1", F));
    auto twisted = p_cycle(cyclic("d1 - x1^2", F));
    auto X = FPoly::variable(F, 2, 0);
    auto S = FPoly::variable(F, 2, 1);
    std::vector<FPoly> rotated;
    for (const auto& g : airy.ann.gb.gens) rotated.push_back(substitute(g, {S, -X}));
    GroebnerOptions gopt;
    if (!ideal_equal(twisted.ann.gb.gens, rotated, gopt))
        fail(v, "cycle of d1 - x1^2 is not the quarter-turn of the Airy cycle");
    if (v.pass) v.note = "fourier(d1^2 - x1) = x1^2 - d1 and the support rotates by (X,s) -> (s,-X)";
    return v;
}

// 4. pushforward along z -> z^2 commutes with taking cycles, for three
//    rank-1 sources at two primes
Verdict crit_pushforward() {
    Verdict v;
    int checked = 0;
    for (std::uint32_t p : {5u, 7u}) {
        FpDom F(p);
        FiniteCurveMap m(parse_poly("x1^2", F, {"x1"}));
        for (const std::string& src : {"d1", "d1 - 1", "d1 - 3*x1^2"}) {
            auto C = cyclic(src, F);
            auto down = p_cycle(finite_pushforward_curve(C, m));
            auto up = p_cycle(C);
            auto moved = cycle_pushforward(up.components, m, p);
            if (!same_components(down.components, moved))
                fail(v, "p=" + std::to_string(p) + ", source " + src +
                            ": cycle of pushforward differs from pushforward of cycle");
            ++checked;
        }
    }
    if (v.pass)
        v.note = "cycle-of-pushforward = pushforward-of-cycle for " + std::to_string(checked) +
                 " source/prime pairs under z -> z^2";
    return v;
}

// 5. normalization: the structure sheaf has cycle [(s1), 1] and the rank-2
//    module D/D d^2 doubles the multiplicity, not the support
Verdict crit_normalization() {
    Verdict v;
    for (std::uint32_t p : {5u, 7u}) {
        FpDom F(p);
        auto one = p_cycle(cyclic("d1", F));
        if (one.components.size() != 1 || one.components[0].multiplicity != 1 ||
            !ideal_is({one.components[0].eliminant}, tw("s1", F)))
            fail(v, "p=" + std::to_string(p) + ": structure sheaf cycle is not [(s1), 1]");
        auto two = p_cycle(cyclic("d1^2", F));
        if (two.components.size() != 1 || two.components[0].multiplicity != 2 ||
            !ideal_is({two.components[0].eliminant}, tw("s1", F)))
            fail(v, "p=" + std::to_string(p) + ": D/D d^2 cycle is not [(s1), 2]");
    }
    if (v.pass) v.note = "[(s1), 1] for O and [(s1), 2] for D/D d1^2 at p in {5,7}";
    return v;
}

// 6. deformed curvature: the rank-1 oracle x^4 -> x^20 + 4 l^4 at p=5, and
//    the l=0 specialization is the plain matrix 5th power on random inputs
Verdict crit_lambda() {
    Verdict v;
    FpDom F(5);
    {
        FMat T(FPoly::zero(F, 2), 1, 1);
        T.at(0, 0) = parse_lambda_poly("x1^4", F, 1);
        auto PL = p_curvature_lambda(make_lambda_connection(1, 1, std::vector<FMat>{T}));
        if (!(PL.psi[0].at(0, 0) == parse_lambda_poly("x1^20 + 4*l^4", F, 1)))
            fail(v, "deformed curvature of x^4 is not x1^20 + 4*l^4");
    }
    std::mt19937_64 rng(617);
    for (int i = 0; i < 20 && v.pass; ++i) {
        int r = 1 + (int)(rng() % 2);
        FMat T(FPoly::zero(F, 2), r, r);
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) T.at(a, b) = extend_ring(random_poly(rng, F, 1, 3, 3), 1);
        auto PL = p_curvature_lambda(make_lambda_connection(1, r, std::vector<FMat>{T}));
        auto at0 = specialize_lambda(PL.psi[0], F.zero());
        auto Th = specialize_lambda(T, F.zero());
        auto pw = Th;
        for (int k = 1; k < 5; ++k) pw = pw * Th;
        if (!(at0 == pw)) fail(v, "l=0 specialization differs from the matrix 5th power at instance " + std::to_string(i));
    }
    if (v.pass) v.note = "x^4 oracle holds; l=0 specialization = matrix 5th power on 20 random rank<=2 inputs";
    return v;
}

// 7. center action vs plane action for every word of length <= 3 over
//    {rotation, shear(x^d), d <= 4}.  At p=5 the degree-4 shear hits the
//    Wilson constant (4! = -1 mod 5), so the per-letter identity breaks and
//    words containing it genuinely fail; this criterion is expected to FAIL
//    and the note records the exact counts and the least counterexample.
Verdict crit_twist_sweep() {
    Verdict v;
    std::string detail;
    for (std::uint32_t p : {5u, 7u}) {
        FpDom F(p);
        std::vector<AutGen> letters;
        letters.push_back(AutGen::linear(F, 0, 1, -1, 0));
        for (int d = 1; d <= 4; ++d)
            letters.push_back(AutGen::shear(parse_poly("x1^" + std::to_string(d), F, {"x1"})));
        int total = 0, bad = 0;
        std::string first_bad;
        const int L = (int)letters.size();
        for (int len = 1; len <= 3; ++len) {
            int count = 1;
            for (int k = 0; k < len; ++k) count *= L;
            for (int idx = 0; idx < count; ++idx) {
                int t = idx;
                std::vector<AutGen> gens;
                for (int k = 0; k < len; ++k) {
                    gens.push_back(letters[(std::size_t)(t % L)]);
                    t /= L;
                }
                AutWord w{F, gens};
                ++total;
                if (!verify_frobenius_twist(w).ok) {
                    ++bad;
                    if (first_bad.empty()) first_bad = word_label(w);
                }
            }
        }
        if (!detail.empty()) detail += "; ";
        detail += std::to_string(total - bad) + "/" + std::to_string(total) + " words pass at p=" +
                  std::to_string(p);
        if (bad > 0) {
            detail += ", least counterexample " + first_bad;
            v.pass = false;
        }
        if (total < 100) fail(v, "sweep enumerated fewer than 100 words");
    }
    v.note = detail;
    return v;
}

// 8. lifting torsor on the line and obstruction classes on the plane
Verdict crit_lifting() {
    Verdict v;
    FpDom F(5);
    {
        auto triv = make_connection(1, 1, std::vector<FMat>{scalar_mat(cp("0", F, 1))});
        auto L0 = monomial_lift(triv);
        auto L1 = act_on_lift(L0, scalar_form({cp("1", F, 1)}));
        auto iso = lifts_isomorphic(L1, L0, 50);
        if (!iso.isomorphic || !iso.witness || !(iso.witness->at(0, 0) == cp("x1", F, 1)))
            fail(v, "trivial vs trivial + p dx: expected witness x");
        auto L4 = act_on_lift(L0, scalar_form({cp("x1^4", F, 1)}));
        auto iso4 = lifts_isomorphic(L4, L0, 50);
        if (iso4.isomorphic || !iso4.bound_certified)
            fail(v, "trivial vs trivial + p x^4 dx: expected a certified non-isomorphism at bound 50");
    }
    {
        auto C = make_connection(2, 1,
                                 std::vector<FMat>{scalar_mat(cp("x1^4*x2^5", F, 2)),
                                                   scalar_mat(cp("0", F, 2))});
        auto oc = obstruction_class(C);
        bool ok = !oc.liftable && oc.representative.comp[0].at(0, 0) == cp("4*x1^4*x2^4", F, 2) &&
                  oc.cartier_obstructions == std::vector<std::string>{"4*x1^4*x2^4"};
        if (!ok) fail(v, "x^4 y^5 dx: obstruction class is not -x^4 y^4 dx dy");
    }
    std::mt19937_64 rng(5150);
    for (int i = 0; i < 10 && v.pass; ++i) {
        auto f = random_poly(rng, F, 2, 4, 3);
        auto oc = obstruction_class(potential_connection(f));
        if (!oc.liftable || !oc.flat_lift || !oc.flat_lift->flat)
            fail(v, "potential connection not recognized as liftable at instance " + std::to_string(i));
    }
    if (v.pass) v.note = "witness x, certified non-isomorphism at bound 50, obstruction 4*x1^4*x2^4, 10 liftable potentials";
    return v;
}

// 9. de Rham cohomology of e^x vanishes at three truncations; the trivial
//    connection counts its surviving monomials, floor(d/p)+1 of them in
//    degree 0 and floor(d/p) in degree 1
Verdict crit_derham() {
    Verdict v;
    FpDom F(5);
    auto expc = cyclic("d1 - 1", F);
    for (int b : {10, 20, 40}) {
        auto rep = derham_cohomology(expc, b);
        if (rep.h[0].dim != 0 || rep.h[1].dim != 0)
            fail(v, "e^x cohomology does not vanish at bound " + std::to_string(b));
    }
    auto triv = cyclic("d1", F);
    for (int b : {5, 10, 20, 40}) {
        auto rep = derham_cohomology(triv, b);
        if (rep.h[0].dim != b / 5 + 1)
            fail(v, "trivial h0 at bound " + std::to_string(b) + " is " + std::to_string(rep.h[0].dim) +
                        ", want " + std::to_string(b / 5 + 1));
        if (rep.h[1].dim != b / 5)
            fail(v, "trivial h1 at bound " + std::to_string(b) + " is " + std::to_string(rep.h[1].dim) +
                        ", want " + std::to_string(b / 5));
    }
    if (v.pass) v.note = "e^x vanishes at bounds 10/20/40; trivial dims are floor(d/p)+1 and floor(d/p)";
    return v;
}

// 10. randomized property suites, 100 instances each
Verdict crit_suites() {
    Verdict v;
    if (!suites::suite_groebner_closure(100, 9001)) fail(v, "S-polynomial closure suite failed");
    if (!suites::suite_weyl_algebra(100, 9002)) fail(v, "Weyl relation suite failed");
    if (!suites::suite_pcurvature(100, 9003)) fail(v, "curvature linearity/commutation suite failed");
    if (!suites::suite_cycle_mass(100, 9004)) fail(v, "cycle mass suite failed");
    if (v.pass) v.note = "4 suites x 100 instances, zero failures";
    return v;
}

}  // namespace

int main() {
    struct Row {
        int id;
        const char* title;
        double limit;
        std::function<Verdict()> fn;
    };
    const std::vector<Row> rows = {
        {1, "exponential module support", 4.0, crit_exponential},
        {2, "Airy support and curvature matrix", 2.0, crit_airy},
        {3, "Fourier rotation of cycles", 2.0, crit_fourier},
        {4, "pushforward compatibility", 10.0, crit_pushforward},
        {5, "cycle normalization", 1.0, crit_normalization},
        {6, "deformed curvature", 5.0, crit_lambda},
        {7, "center-action sweep, words of length <= 3", 60.0, crit_twist_sweep},
        {8, "lifting torsor and obstructions", 10.0, crit_lifting},
        {9, "de Rham truncation stability", 5.0, crit_derham},
        {10, "randomized property suites", 120.0, crit_suites},
    };

    std::vector<int> failed;
    for (const auto& row : rows) {
        auto t0 = Clock::now();
        Verdict v;
        try {
            v = row.fn();
        } catch (const Error& e) {
            v.pass = false;
            v.note = std::string("exception: ") + e.what();
        }
        double dt = since(t0);
        if (v.pass && dt >= row.limit) {
            v.pass = false;
            v.note = "over the " + std::to_string((int)row.limit) + "s budget";
        }
        if (!v.pass) failed.push_back(row.id);
        std::printf("criterion %2d: %s (%.2fs) %s -- %s\n", row.id, v.pass ? "PASS" : "FAIL", dt,
                    row.title, v.note.c_str());
    }

    if (failed.empty()) {
        std::printf("summary: 10/10 criteria passed\n");
    } else if (failed == std::vector<int>{7}) {
        std::printf("summary: 9/10 criteria passed; expected failure: criterion 7, degree p-1 shears "
                    "pick up the Wilson constant at p=5\n");
    } else {
        std::printf("summary: %d/10 criteria passed; unexpected failures:", 10 - (int)failed.size());
        for (int id : failed) std::printf(" %d", id);
        std::printf("\n");
    }
    return failed.empty() ? 0 : 1;
}
