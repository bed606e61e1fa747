#include <doctest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"
#include "torsion.hpp"

using namespace qhom;
using qhom::testing::q;
using qhom::testing::two_term;

namespace {

BasedComplex based(const ChainComplex& c) {
    return BasedComplex{c, {}};
}

// Torsion recomputed with a randomized admissible choice of the pivot sets,
// independent of the leftmost-pivot production path.
Rational torsion_random_choice(const BasedComplex& c, std::mt19937& rng) {
    const ChainComplex& cc = c.complex;
    std::map<int, std::vector<int>> chosen;
    std::map<int, QMatrix> d;
    for (int n = cc.min_degree(); n <= cc.max_degree() + 1; ++n) {
        d[n] = c.based_diff(n);
        int r = rank(d[n]);
        // Random subset of columns of the right size with independent image.
        std::vector<int> cols(d[n].cols());
        for (int i = 0; i < d[n].cols(); ++i) cols[i] = i;
        std::vector<int> pick;
        int guard = 0;
        do {
            std::shuffle(cols.begin(), cols.end(), rng);
            pick.assign(cols.begin(), cols.begin() + r);
            std::sort(pick.begin(), pick.end());
            if (++guard > 200) fail_domain("no admissible choice found");
        } while (rank(d[n].columns(pick)) != r);
        chosen[n] = pick;
    }
    Rational tau(1);
    for (int n = cc.min_degree(); n <= cc.max_degree(); ++n) {
        if (cc.dim(n) == 0) continue;
        QMatrix m = d[n + 1].columns(chosen[n + 1]);
        for (int idx : chosen[n]) {
            QMatrix e(cc.dim(n), 1);
            e.at(idx, 0) = Rational(1);
            m = m.hcat(e);
        }
        Rational det = determinant(m).abs();
        if (det.is_zero()) fail_domain("random choice not a basis");
        tau *= (n % 2 == 0) ? det : det.inverse();
    }
    return tau;
}

// A random based quasi-isomorphism A -> A + (acyclic), with an invertible
// degree-wise change of target basis baked into the map.
struct QuasiIso {
    BasedComplex a, b;
    ChainMap f;
};

QuasiIso random_quasi_iso(std::mt19937& rng, const ChainComplex& a) {
    ChainComplex extra = qhom::testing::random_acyclic(rng, 3, 2);
    ChainComplex b = direct_sum(a, extra);
    std::map<int, QMatrix> comps;
    std::map<int, QMatrix> change;
    for (int n = b.min_degree(); n <= b.max_degree(); ++n)
        if (b.dim(n) > 0) change[n] = qhom::testing::random_invertible(rng, b.dim(n));
    // Twist the target complex by the change of basis so f stays a chain map.
    std::map<int, QMatrix> diffs;
    for (int n = b.min_degree(); n <= b.max_degree(); ++n) {
        if (b.dim(n) == 0) continue;
        QMatrix d = b.diff(n) * change[n];
        if (b.dim(n - 1) > 0) d = inverse(change[n - 1]) * d;
        diffs[n] = std::move(d);
    }
    ChainComplex bt(b.min_degree(), b.dims(), std::move(diffs));
    for (int n = a.min_degree(); n <= a.max_degree(); ++n) {
        if (a.dim(n) == 0 || bt.dim(n) == 0) continue;
        QMatrix inc(b.dim(n), a.dim(n));
        for (int i = 0; i < a.dim(n); ++i) inc.at(i, i) = Rational(1);
        comps[n] = inverse(change[n]) * inc;
    }
    ChainMap f(a, bt, std::move(comps));
    f.require_chain_map("random quasi-iso");
    return {based(a), based(bt), f};
}

}  // namespace

TEST_CASE("torsion examples") {
    CHECK(torsion(based(two_term(5))) == q(5));
    CHECK(torsion(based(two_term(-5))) == q(5));
    CHECK(torsion(based(direct_sum(two_term(2), two_term(3)))) == q(6));
}

TEST_CASE("torsion requires acyclicity") {
    CHECK_THROWS_AS((void)torsion(based(qhom::testing::point(0))), Error);
}

TEST_CASE("torsion is independent of the pivot choice") {
    std::mt19937 rng(97);
    for (int i = 0; i < 25; ++i) {
        ChainComplex c = qhom::testing::random_acyclic(rng, 4, 3);
        if (c.total_dim() == 0) continue;
        BasedComplex bc = based(c);
        Rational expected = torsion(bc);
        for (int k = 0; k < 3; ++k) CHECK(torsion_random_choice(bc, rng) == expected);
    }
}

TEST_CASE("base change scales torsion by det(P)^(-1)^(n+1)") {
    BasedComplex bc = based(two_term(5));  // degrees 1 -> 0
    SUBCASE("degree-0 change divides") {
        BasedComplex changed = bc;
        changed.basis[0] = QMatrix::from_rows({{q(2)}});
        CHECK(torsion(changed) == q(5) / q(2));
    }
    SUBCASE("degree-1 change multiplies") {
        BasedComplex changed = bc;
        changed.basis[1] = QMatrix::from_rows({{q(2)}});
        CHECK(torsion(changed) == q(10));
    }
    SUBCASE("random check across degrees") {
        std::mt19937 rng(103);
        for (int i = 0; i < 10; ++i) {
            ChainComplex c = qhom::testing::random_acyclic(rng, 4, 2);
            if (c.total_dim() == 0) continue;
            BasedComplex plain = based(c);
            Rational before = torsion(plain);
            int n = c.min_degree() + static_cast<int>(rng() % c.dims().size());
            if (c.dim(n) == 0) continue;
            QMatrix p = qhom::testing::random_invertible(rng, c.dim(n));
            BasedComplex changed = plain;
            changed.basis[n] = p;
            Rational factor = determinant(p).abs();
            Rational expected = (n % 2 == 0) ? before / factor : before * factor;
            CHECK(torsion(changed) == expected);
        }
    }
}

TEST_CASE("torsion of quasi-isomorphisms") {
    ChainComplex pt = qhom::testing::point(0);
    SUBCASE("identity has torsion 1") {
        CHECK(torsion_of_quasi_iso(based(pt), based(pt), ChainMap::identity(pt)) == q(1));
    }
    SUBCASE("multiplication by 3") {
        CHECK(torsion_of_quasi_iso(based(pt), based(pt), ChainMap::diagonal(pt, pt, q(3))) ==
              q(3));
    }
    SUBCASE("upper triangular determinant") {
        ChainComplex c2 = qhom::testing::point(0, 2);
        std::map<int, QMatrix> comps;
        comps[0] = QMatrix::from_rows({{q(1), q(1)}, {q(0), q(2)}});
        ChainMap f(c2, c2, std::move(comps));
        CHECK(torsion_of_quasi_iso(based(c2), based(c2), f) == q(2));
    }
    SUBCASE("non-quasi-isomorphisms are rejected") {
        ChainMap zero = ChainMap::zero(pt, pt);
        CHECK_THROWS_AS((void)torsion_of_quasi_iso(based(pt), based(pt), zero), Error);
    }
}

TEST_CASE("composition multiplicativity") {
    ChainComplex pt = qhom::testing::point(0);
    SUBCASE("times two then times three") {
        CompositionReport rep =
            composition_check(based(pt), based(pt), based(pt), ChainMap::diagonal(pt, pt, q(2)),
                              ChainMap::diagonal(pt, pt, q(3)));
        CHECK(rep.tau_f == q(2));
        CHECK(rep.tau_g == q(3));
        CHECK(rep.tau_gf == q(6));
        CHECK(rep.multiplicative);
    }
    SUBCASE("identity leaves torsion alone") {
        CompositionReport rep =
            composition_check(based(pt), based(pt), based(pt), ChainMap::identity(pt),
                              ChainMap::diagonal(pt, pt, q(7)));
        CHECK(rep.tau_gf == rep.tau_g);
        CHECK(rep.multiplicative);
    }
    SUBCASE("random degree-0 isomorphisms") {
        std::mt19937 rng(107);
        ChainComplex c3 = qhom::testing::point(0, 3);
        for (int i = 0; i < 25; ++i) {
            std::map<int, QMatrix> fc, gc;
            fc[0] = qhom::testing::random_invertible(rng, 3);
            gc[0] = qhom::testing::random_invertible(rng, 3);
            ChainMap f(c3, c3, std::move(fc));
            ChainMap g(c3, c3, std::move(gc));
            CompositionReport rep = composition_check(based(c3), based(c3), based(c3), f, g);
            CHECK(rep.multiplicative);
            CHECK(rep.tau_f == determinant(f.component(0)).abs());
        }
    }
    SUBCASE("random shifted quasi-isomorphisms") {
        std::mt19937 rng(109);
        for (int i = 0; i < 20; ++i) {
            ChainComplex a = qhom::testing::random_complex(rng, 3, 2);
            if (a.is_empty()) continue;
            QuasiIso fq = random_quasi_iso(rng, a);
            QuasiIso gq = random_quasi_iso(rng, fq.b.complex);
            CompositionReport rep =
                composition_check(fq.a, fq.b, gq.b, fq.f, gq.f);
            CHECK(rep.multiplicative);
        }
    }
}

TEST_CASE("short exact additivity with compatible bases") {
    std::mt19937 rng(113);
    for (int i = 0; i < 25; ++i) {
        ChainComplex sub = qhom::testing::random_acyclic(rng, 4, 2);
        ChainComplex quo = qhom::testing::random_acyclic(rng, 4, 2);
        // Total = sub (+) quo with an upper-triangular connecting block
        // X = d_sub Y - Y d_quo for random Y, so d^2 = 0 automatically.
        int lo = std::min(sub.min_degree(), quo.min_degree());
        int hi = std::max(sub.max_degree(), quo.max_degree());
        std::map<int, QMatrix> y;
        for (int n = lo; n <= hi; ++n)
            if (quo.dim(n) > 0 && sub.dim(n) > 0)
                y[n] = qhom::testing::random_matrix(rng, sub.dim(n), quo.dim(n));
        auto y_at = [&](int n) {
            auto it = y.find(n);
            if (it != y.end()) return it->second;
            return QMatrix(sub.dim(n), quo.dim(n));
        };
        std::vector<int> dims;
        std::map<int, QMatrix> diffs;
        for (int n = lo; n <= hi; ++n) dims.push_back(sub.dim(n) + quo.dim(n));
        for (int n = lo; n <= hi + 1; ++n) {
            QMatrix x = sub.diff(n) * y_at(n) - y_at(n - 1) * quo.diff(n);
            QMatrix d(sub.dim(n - 1) + quo.dim(n - 1), sub.dim(n) + quo.dim(n));
            for (int r = 0; r < sub.dim(n - 1); ++r) {
                for (int c = 0; c < sub.dim(n); ++c) d.at(r, c) = sub.diff(n).at(r, c);
                for (int c = 0; c < quo.dim(n); ++c) d.at(r, sub.dim(n) + c) = x.at(r, c);
            }
            for (int r = 0; r < quo.dim(n - 1); ++r)
                for (int c = 0; c < quo.dim(n); ++c)
                    d.at(sub.dim(n - 1) + r, sub.dim(n) + c) = quo.diff(n).at(r, c);
            diffs[n] = std::move(d);
        }
        ChainComplex total(lo, std::move(dims), std::move(diffs));
        REQUIRE(verify_complex(total).ok);
        CHECK(torsion(based(total)) == torsion(based(sub)) * torsion(based(quo)));
    }
}

TEST_CASE("homotopic quasi-isomorphisms have equal torsion") {
    std::mt19937 rng(127);
    for (int i = 0; i < 20; ++i) {
        ChainComplex a = qhom::testing::random_complex(rng, 3, 2);
        if (a.is_empty()) continue;
        QuasiIso fq = random_quasi_iso(rng, a);
        // f1 = f0 + dh + hd for random h is chain homotopic to f0.
        auto h = qhom::testing::random_degree_one(rng, a, fq.b.complex);
        auto h_at = [&](int n) {
            auto it = h.find(n);
            if (it != h.end()) return it->second;
            return QMatrix(fq.b.complex.dim(n + 1), a.dim(n));
        };
        std::map<int, QMatrix> comps;
        for (int n = a.min_degree(); n <= std::max(a.max_degree(), fq.b.complex.max_degree());
             ++n) {
            if (a.dim(n) == 0 || fq.b.complex.dim(n) == 0) continue;
            comps[n] = fq.f.component(n) + fq.b.complex.diff(n + 1) * h_at(n) +
                       h_at(n - 1) * a.diff(n);
        }
        ChainMap f1(a, fq.b.complex, std::move(comps));
        f1.require_chain_map("homotopic deformation");
        CHECK(torsion_of_quasi_iso(fq.a, fq.b, f1) == torsion_of_quasi_iso(fq.a, fq.b, fq.f));
    }
}
