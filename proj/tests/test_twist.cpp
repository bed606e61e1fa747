#include <doctest.h>

#include <random>

#include "models.hpp"
#include "test_support.hpp"
#include "twist.hpp"

using namespace qhom;
using qhom::testing::q;

namespace {

GradedModule h_circle() {
    return GradedModule{{1, 1}};
}

// phi on the circle edge acting by (0, -2) on (H_0, H_1): the Klein twist.
TwistingCochain klein_cochain() {
    TwistingCochain phi(models::circle(), h_circle());
    EndElement v(h_circle(), 0);
    v.block(1).at(0, 0) = q(-2);
    phi.set("e", v);
    return phi;
}

// phi on the minimal sphere sending H_0 to H_1.
TwistingCochain hopf_cochain() {
    TwistingCochain phi(models::sphere2(), h_circle());
    EndElement v(h_circle(), 1);
    v.block(0).at(0, 0) = q(1);
    phi.set("s", v);
    return phi;
}

// Degree-1 cochain on the torus from three diagonal edge values.
TwistingCochain torus_diag_cochain(const Rational& a0, const Rational& a1, const Rational& b0,
                                   const Rational& b1, const Rational& c0, const Rational& c1) {
    TwistingCochain phi(models::torus(), h_circle());
    auto put = [&](const char* e, const Rational& x, const Rational& y) {
        EndElement v(h_circle(), 0);
        v.block(0).at(0, 0) = x;
        v.block(1).at(0, 0) = y;
        phi.set(e, v);
    };
    put("a", a0, a1);
    put("b", b0, b1);
    put("c", c0, c1);
    return phi;
}

}  // namespace

TEST_CASE("cup product") {
    SUBCASE("zero cochain cups to zero") {
        TwistingCochain zero(models::torus(), h_circle());
        TwistingCochain phi = torus_diag_cochain(q(1), q(2), q(3), q(4), q(5), q(6));
        CHECK(cup_at(zero, phi, "T1").is_zero());
        CHECK(cup_at(phi, zero, "T1").is_zero());
    }
    SUBCASE("sphere middle factors are degenerate") {
        TwistingCochain phi = hopf_cochain();
        CHECK(cup_at(phi, phi, "s").is_zero());
    }
    SUBCASE("torus triangle has the single i=1 splitting") {
        TwistingCochain phi = torus_diag_cochain(q(2), q(3), q(5), q(7), q(0), q(0));
        // T1 front edge is a, back edge is b: the splitting composes the two
        // edge values, 2*5 and 3*7 on the diagonal.
        EndElement u = cup_at(phi, phi, "T1");
        CHECK(u.block(0).at(0, 0) == q(10));
        CHECK(u.block(1).at(0, 0) == q(21));
    }
}

TEST_CASE("verify_twisting") {
    SUBCASE("no 2-simplices means vacuously ok") {
        CHECK(verify_twisting(klein_cochain()).ok);
    }
    SUBCASE("hopf cochain passes: boundary degenerate, cup vanishes") {
        CHECK(verify_twisting(hopf_cochain()).ok);
    }
    SUBCASE("unbalanced edge value on the torus is caught") {
        TwistingCochain phi = torus_diag_cochain(q(0), q(0), q(0), q(0), q(3), q(3));
        TwistReport rep = verify_twisting(phi);
        CHECK(!rep.ok);
        CHECK(rep.simplex == "T1");
    }
    SUBCASE("identity requires phi(dT) = phi(front) phi(back)") {
        // With diagonal values x+y-z = xy per coordinate the identity holds.
        TwistingCochain good = torus_diag_cochain(q(2), q(0), q(3), q(0), q(-1), q(0));
        CHECK(verify_twisting(good).ok);  // 2+3-(-1) = 6 = 2*3 in H_0, 0 in H_1
    }
}

TEST_CASE("cap product examples") {
    SUBCASE("zero cochain caps to zero") {
        TwistingCochain zero(models::circle(), h_circle());
        auto out = cap(zero, {{{}, "e"}, 0, 0, q(1)});
        CHECK(out.empty());
    }
    SUBCASE("sphere: s (x) z0 goes to pt (x) z1") {
        auto out = cap(hopf_cochain(), {{{}, "s"}, 0, 0, q(1)});
        REQUIRE(out.size() == 1);
        CHECK(out[0].simplex == SimplexElement{{}, "pt"});
        CHECK(out[0].fiber_degree == 1);
        CHECK(out[0].fiber_index == 0);
        CHECK(out[0].coeff == q(1));
    }
    SUBCASE("circle: e (x) z goes to pt (x) phi(e)(z)") {
        auto out = cap(klein_cochain(), {{{}, "e"}, 1, 0, q(1)});
        REQUIRE(out.size() == 1);
        CHECK(out[0].simplex == SimplexElement{{}, "pt"});
        CHECK(out[0].fiber_degree == 1);
        CHECK(out[0].coeff == q(-2));
    }
}

TEST_CASE("twisted tensor products") {
    SUBCASE("zero twist is the Kunneth tensor") {
        TwistingCochain zero(models::torus(), h_circle());
        ChainComplex t = twisted_tensor(zero);
        ChainComplex expect = tensor_product(normalized_chains(models::torus()),
                                             ChainComplex(0, {1, 1}, {}));
        CHECK(homology(t).betti == homology(expect).betti);
    }
    SUBCASE("Klein twist over the circle gives the Klein bottle") {
        ChainComplex t = twisted_tensor(klein_cochain());
        CHECK(t.dims() == std::vector<int>{1, 2, 1});
        HomologyData oracle = homology(normalized_chains(models::klein_bottle()));
        CHECK(homology(t).betti == oracle.betti);
    }
    SUBCASE("Hopf twist over the sphere gives the 3-sphere") {
        ChainComplex t = twisted_tensor(hopf_cochain());
        HomologyData oracle = homology(models::boundary_delta4_chains());
        CHECK(homology(t).betti == oracle.betti);
    }
    SUBCASE("construction is refused when the identity fails") {
        TwistingCochain bad = torus_diag_cochain(q(0), q(0), q(0), q(0), q(3), q(3));
        CHECK_THROWS_AS((void)twisted_tensor(bad), Error);
    }
}

TEST_CASE("twisting identity iff d*d = 0, both directions") {
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> entry(-2, 2);
    int failures = 0, passes = 0;
    for (int trial = 0; trial < 200; ++trial) {
        TwistingCochain phi =
            torus_diag_cochain(q(entry(rng)), q(entry(rng)), q(entry(rng)), q(entry(rng)),
                               q(entry(rng)), q(entry(rng)));
        bool identity_ok = verify_twisting(phi).ok;
        ChainComplex attempted = twisted_differential_unchecked(phi);
        bool square_zero = verify_complex(attempted).ok;
        CHECK(identity_ok == square_zero);
        (identity_ok ? passes : failures) += 1;
    }
    // The sample must actually exercise both directions.
    CHECK(passes > 0);
    CHECK(failures > 0);
}

TEST_CASE("euler characteristic of twisted products is twist independent") {
    CHECK(euler_characteristic(twisted_tensor(klein_cochain())) == 0);   // 0 * 0
    CHECK(euler_characteristic(twisted_tensor(hopf_cochain())) == 0);    // 2 * 0
    TwistingCochain zero(models::torus(), GradedModule{{2, 1}});
    CHECK(euler_characteristic(twisted_tensor(zero)) == 0);              // 0 * 1
}

TEST_CASE("homological filtration") {
    SUBCASE("level zero is the whole complex") {
        FiltrationLevel l = homological_filtration(klein_cochain(), 0);
        CHECK(l.complex == twisted_tensor(klein_cochain()));
    }
    SUBCASE("Klein level one is acyclic") {
        FiltrationLevel l = homological_filtration(klein_cochain(), 1);
        CHECK(l.complex.dims() == std::vector<int>{0, 1, 1});
        HomologyData h = homology(l.complex);
        CHECK(h.betti_at(1) == 0);
        CHECK(h.betti_at(2) == 0);
    }
    SUBCASE("Hopf level one is the shifted sphere") {
        FiltrationLevel l = homological_filtration(hopf_cochain(), 1);
        HomologyData h = homology(l.complex);
        CHECK(h.betti_at(1) == 1);
        CHECK(h.betti_at(3) == 1);
    }
    SUBCASE("levels above the top are zero, not an error") {
        FiltrationLevel l = homological_filtration(klein_cochain(), 5);
        CHECK(l.complex.total_dim() == 0);
    }
    SUBCASE("inclusions are chain maps and dims are monotone") {
        TwistingCochain phi = hopf_cochain();
        ChainComplex total = twisted_tensor(phi);
        long long chi_sum = 0;
        for (int n = 0; n <= phi.fiber().top(); ++n) {
            FiltrationLevel l = homological_filtration(phi, n);
            CHECK(l.inclusion.is_chain_map());
            chi_sum += euler_characteristic(filtration_quotient(phi, n).cokernel);
        }
        CHECK(chi_sum == euler_characteristic(total));
    }
}

TEST_CASE("filtration quotient identification") {
    SUBCASE("zero twist: quotients are plain tensors") {
        TwistingCochain zero(models::torus(), h_circle());
        for (int n = 0; n <= 1; ++n) {
            FiltrationQuotient fq = filtration_quotient(zero, n);
            CHECK(fq.iso_check);
        }
    }
    SUBCASE("Klein quotient differential is multiplication by -2") {
        FiltrationQuotient fq = filtration_quotient(klein_cochain(), 1);
        CHECK(fq.iso_check);
        CHECK(fq.cokernel.dims() == std::vector<int>{0, 1, 1});
        CHECK(fq.cokernel.diff(2) == QMatrix::from_rows({{q(-2)}}));
    }
    SUBCASE("Hopf quotients have zero differential") {
        for (int n = 0; n <= 1; ++n) {
            FiltrationQuotient fq = filtration_quotient(hopf_cochain(), n);
            CHECK(fq.iso_check);
            for (int deg = 1; deg <= fq.cokernel.max_degree(); ++deg)
                CHECK(fq.cokernel.diff(deg).is_zero());
        }
    }
    SUBCASE("long-exact-sequence rank constraints") {
        TwistingCochain phi = klein_cochain();
        for (int n = 0; n <= 1; ++n) {
            FiltrationLevel ln = homological_filtration(phi, n);
            FiltrationLevel ln1 = homological_filtration(phi, n + 1);
            FiltrationQuotient fq = filtration_quotient(phi, n);
            HomologyData a = homology(ln1.complex), b = homology(ln.complex),
                         c = homology(fq.cokernel);
            CHECK(euler_characteristic(ln.complex) ==
                  euler_characteristic(ln1.complex) + euler_characteristic(fq.cokernel));
            for (int deg = 0; deg <= ln.complex.max_degree(); ++deg) {
                CHECK(b.betti_at(deg) <= a.betti_at(deg) + c.betti_at(deg));
                CHECK(c.betti_at(deg) <= b.betti_at(deg) + a.betti_at(deg - 1));
                CHECK(a.betti_at(deg) <= b.betti_at(deg) + c.betti_at(deg + 1));
            }
        }
    }
}

TEST_CASE("relative twisted complexes") {
    ReducedSimplicialSet s1 = models::circle();
    SUBCASE("pair (X, X) gives zero") {
        SubComplexInclusion pair(s1, {"pt", "e"});
        ChainComplex rel = relative_twisted(pair, klein_cochain());
        CHECK(rel.total_dim() == 0);
    }
    SUBCASE("pair (X, pt) with zero twist is relative chains tensor H") {
        TwistingCochain zero(s1, h_circle());
        SubComplexInclusion pair(s1, {"pt"});
        ChainComplex rel = relative_twisted(pair, zero);
        CHECK(rel.dims() == std::vector<int>{0, 1, 1});
        HomologyData h = homology(rel);
        CHECK(h.betti_at(1) == 1);
        CHECK(h.betti_at(2) == 1);
    }
    SUBCASE("pair (S1, pt) with the Klein twist kills the twist") {
        SubComplexInclusion pair(s1, {"pt"});
        ChainComplex rel = relative_twisted(pair, klein_cochain());
        CHECK(rel.dims() == std::vector<int>{0, 1, 1});
        for (int deg = 1; deg <= 2; ++deg) CHECK(rel.diff(deg).is_zero());
        HomologyData h = homology(rel);
        CHECK(h.betti_at(0) == 0);
        CHECK(h.betti_at(1) == 1);
        CHECK(h.betti_at(2) == 1);
    }
}

TEST_CASE("flat End round trip and block validation") {
    EndElement v(h_circle(), 1);
    v.block(0).at(0, 0) = q(3);
    QMatrix flat = v.flat();
    CHECK(flat.at(1, 0) == q(3));
    CHECK(EndElement::from_flat(h_circle(), 1, flat) == v);
    // An entry outside the allowed blocks is rejected.
    QMatrix bad(2, 2);
    bad.at(0, 1) = q(1);  // would lower degree
    CHECK_THROWS_AS((void)EndElement::from_flat(h_circle(), 1, bad), Error);
}
