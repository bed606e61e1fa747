#pragma once

#include "simplicial.hpp"

namespace qhom {

// Non-negatively graded vector space with zero differential (a fiber
// homology); dims[q] is the dimension in degree q.
struct GradedModule {
    std::vector<int> dims;

    int dim(int q) const {
        return (q >= 0 && q < static_cast<int>(dims.size())) ? dims[q] : 0;
    }
    int top() const { return static_cast<int>(dims.size()) - 1; }
    int total() const;
    // Offset of degree q inside the concatenated ascending-degree basis.
    int offset(int q) const;

    friend bool operator==(const GradedModule& a, const GradedModule& b) {
        return a.dims == b.dims;
    }
};

// Element of End(H) raising degree by a fixed shift; blocks[q] maps H_q to
// H_{q+shift}. The endomorphism algebra carries the zero differential.
class EndElement {
  public:
    EndElement() : shift_(0) {}
    EndElement(const GradedModule& h, int shift);  // zero element

    int shift() const { return shift_; }
    const GradedModule& module() const { return h_; }
    const QMatrix& block(int q) const;
    QMatrix& block(int q);

    bool is_zero() const;
    // Composition this after other; shifts add.
    EndElement compose(const EndElement& other) const;
    EndElement operator+(const EndElement& o) const;
    EndElement operator-(const EndElement& o) const;
    EndElement scaled(const Rational& s) const;

    // The single matrix (+)H_q -> (+)H_{q+shift} in ascending-degree block
    // order, as used by the file format.
    QMatrix flat() const;
    static EndElement from_flat(const GradedModule& h, int shift, const QMatrix& m);

    friend bool operator==(const EndElement& a, const EndElement& b);

  private:
    GradedModule h_;
    int shift_;
    std::vector<QMatrix> blocks_;  // indexed by source degree q = 0..top
};

// Degree-lowering map from normalized base chains to End(H): an element of
// End_{n-1}(H) for each nondegenerate n-simplex, n >= 1, zero elsewhere.
class TwistingCochain {
  public:
    TwistingCochain() = default;
    TwistingCochain(ReducedSimplicialSet base, GradedModule fiber);

    const ReducedSimplicialSet& base() const { return base_; }
    const GradedModule& fiber() const { return fiber_; }

    void set(const std::string& simplex_id, EndElement value);
    // Value on a possibly-degenerate element: zero on degenerates and on
    // dimension 0, the stored component otherwise.
    EndElement at(const SimplexElement& el) const;
    EndElement at(const std::string& id) const;

    const std::map<std::string, EndElement>& components() const { return comps_; }

  private:
    ReducedSimplicialSet base_;
    GradedModule fiber_;
    std::map<std::string, EndElement> comps_;
};

// Cup product against the Alexander-Whitney diagonal, restricted to
// splittings with both factors of dimension >= 1:
//   (phi u psi)(s) = sum_i (-1)^(i-1) phi(front_i s) . psi(back_(n-i) s).
// The sign pairs with the Koszul sign in the cap product below, so that the
// twisting identity is exactly equivalent to d_phi^2 = 0.
EndElement cup_at(const TwistingCochain& phi, const TwistingCochain& psi, const std::string& id);

struct TwistReport {
    bool ok = true;
    std::string simplex;
    std::string message;
};

// Checks -phi(ds) + (phi u phi)(s) = 0 on every nondegenerate simplex of
// dimension >= 2 (the End differential is zero, so the d.phi term vanishes).
TwistReport verify_twisting(const TwistingCochain& phi);

// One term of an element of C'(X) (x) H.
struct TensorTerm {
    SimplexElement simplex;
    int fiber_degree = 0;
    int fiber_index = 0;
    Rational coeff;
};

// Cap product phi ^ (s (x) z) = sum_i (-1)^i front_i(s) (x) phi(back_(n-i) s)(z),
// over splittings whose back factor has dimension >= 1. Terms with a
// degenerate front factor are dropped.
std::vector<TensorTerm> cap(const TwistingCochain& phi, const TensorTerm& term);

// Basis bookkeeping for C'(X) (x) H: degree-n basis is ordered by ascending
// base degree p, then base simplex index, then fiber index within H_(n-p).
struct TwistedLayout {
    ChainComplex base_chains;
    GradedModule fiber;

    int dim(int n) const;
    int index(int n, int p, int s, int f) const;
    // Inverse lookup: (p, s, f) of a position in degree n.
    std::array<int, 3> locate(int n, int pos) const;
};

TwistedLayout twisted_layout(const ReducedSimplicialSet& base, const GradedModule& fiber);

// The twisted differential d (x) id + phi ^ - as matrices (the fiber carries
// no differential). Does not check the twisting identity.
ChainComplex twisted_differential_unchecked(const TwistingCochain& phi);

// Twisted tensor product C'(X) (x)_phi H. Refuses construction when the
// twisting identity fails, and machine-verifies d^2 = 0 afterwards.
ChainComplex twisted_tensor(const TwistingCochain& phi);

struct FiltrationLevel {
    ChainComplex complex;   // L_n
    ChainMap inclusion;     // L_n -> L_0
};

// Homological filtration L_n = C'(X) (x)_phi (fiber degrees >= n).
// Levels above the fiber's top degree give the zero complex.
FiltrationLevel homological_filtration(const TwistingCochain& phi, int n);

struct FiltrationQuotient {
    ChainComplex cokernel;  // L_n / L_{n+1} computed from the filtration
    ChainComplex direct;    // same complex built from the degree-1 part alone
    bool iso_check = false;
};

// The quotient L_n/L_{n+1} computed two ways: as a cokernel of the inclusion
// and directly via d(s (x) z) = ds (x) z + (-1)^(k-1) front_(k-1) s (x)
// phi(back_1 s)(z); iso_check records whether the two differentials agree.
FiltrationQuotient filtration_quotient(const TwistingCochain& phi, int n);

// Relative twisted complex: cokernel of the inclusion of the subcomplex's
// twisted complex, with basis (simplices outside the subcomplex) (x) H.
ChainComplex relative_twisted(const SubComplexInclusion& pair, const TwistingCochain& phi);

}  // namespace qhom
