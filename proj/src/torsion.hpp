#pragma once

#include "chain.hpp"

namespace qhom {

// Chain complex with a distinguished basis per degree: columns of basis[n]
// express the preferred basis in the complex's coordinates (identity when
// absent). Basis matrices must be invertible.
struct BasedComplex {
    ChainComplex complex;
    std::map<int, QMatrix> basis;

    QMatrix basis_at(int n) const;
    // The differential written in the distinguished bases.
    QMatrix based_diff(int n) const;
};

// Reidemeister torsion of a based acyclic complex, up to sign:
//   |tau| = prod_n |det[ d(b_{n+1}) | b_n ]|^((-1)^n)
// where b_n is the leftmost-pivot set of basis chains whose image spans
// im d_n. Requires all Betti numbers to vanish.
Rational torsion(const BasedComplex& c);

// Torsion of the mapping cone of a based quasi-isomorphism, with the
// concatenated basis (source shifted, then target).
Rational torsion_of_quasi_iso(const BasedComplex& a, const BasedComplex& b, const ChainMap& f);

struct CompositionReport {
    Rational tau_f, tau_g, tau_gf;
    bool multiplicative = false;
};

// Checks |tau(g f)| = |tau(f)| |tau(g)| for composable based quasi-isos.
CompositionReport composition_check(const BasedComplex& a, const BasedComplex& b,
                                    const BasedComplex& c, const ChainMap& f, const ChainMap& g);

}  // namespace qhom
