#include "torsion.hpp"

namespace qhom {

QMatrix BasedComplex::basis_at(int n) const {
    auto it = basis.find(n);
    if (it != basis.end()) {
        if (it->second.rows() != complex.dim(n) || it->second.cols() != complex.dim(n))
            fail_domain("basis matrix at degree " + std::to_string(n) + " has wrong size");
        return it->second;
    }
    return QMatrix::identity(complex.dim(n));
}

QMatrix BasedComplex::based_diff(int n) const {
    QMatrix bn = basis_at(n);
    QMatrix bm = basis_at(n - 1);
    if (!is_invertible(bn) || (complex.dim(n - 1) > 0 && !is_invertible(bm)))
        fail_domain("based complex has a singular basis matrix near degree " + std::to_string(n));
    if (complex.dim(n - 1) == 0) return QMatrix(0, complex.dim(n));
    return inverse(bm) * complex.diff(n) * bn;
}

Rational torsion(const BasedComplex& c) {
    const ChainComplex& cc = c.complex;
    HomologyData h = homology(cc);
    for (int b : h.betti)
        if (b != 0) fail_domain("torsion requires an acyclic complex");

    // Pivot-column subsets b_n of the based differentials.
    std::map<int, std::vector<int>> chosen;
    std::map<int, QMatrix> based;
    for (int n = cc.min_degree(); n <= cc.max_degree() + 1; ++n) {
        based[n] = c.based_diff(n);
        chosen[n] = rref(based[n]).pivot_columns;
    }

    Rational tau(1);
    for (int n = cc.min_degree(); n <= cc.max_degree(); ++n) {
        if (cc.dim(n) == 0) continue;
        QMatrix m = based[n + 1].columns(chosen[n + 1]);
        for (int idx : chosen[n]) {
            QMatrix e(cc.dim(n), 1);
            e.at(idx, 0) = Rational(1);
            m = m.hcat(e);
        }
        if (m.rows() != m.cols())
            fail_domain("torsion: chosen chains do not form a basis in degree " +
                        std::to_string(n));
        Rational det = determinant(m).abs();
        if (det.is_zero())
            fail_domain("torsion: chosen chains are dependent in degree " + std::to_string(n));
        tau *= (n % 2 == 0) ? det : det.inverse();
    }
    return tau;
}

Rational torsion_of_quasi_iso(const BasedComplex& a, const BasedComplex& b, const ChainMap& f) {
    if (!(f.source() == a.complex) || !(f.target() == b.complex))
        fail_domain("torsion_of_quasi_iso: map endpoints do not match the based complexes");
    ChainComplex cone = mapping_cone(f);
    BasedComplex based{cone, {}};
    for (int n = cone.min_degree(); n <= cone.max_degree(); ++n)
        if (cone.dim(n) > 0) based.basis[n] = block_diag(a.basis_at(n - 1), b.basis_at(n));
    HomologyData h = homology(cone);
    for (int bt : h.betti)
        if (bt != 0) fail_domain("torsion_of_quasi_iso: map is not a quasi-isomorphism");
    return torsion(based);
}

CompositionReport composition_check(const BasedComplex& a, const BasedComplex& b,
                                    const BasedComplex& c, const ChainMap& f, const ChainMap& g) {
    CompositionReport out;
    out.tau_f = torsion_of_quasi_iso(a, b, f);
    out.tau_g = torsion_of_quasi_iso(b, c, g);
    out.tau_gf = torsion_of_quasi_iso(a, c, g.compose(f));
    out.multiplicative = out.tau_gf == out.tau_f * out.tau_g;
    return out;
}

}  // namespace qhom
