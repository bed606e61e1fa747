#pragma once

#include "twist.hpp"

namespace qhom {

// Action of the edge-generated fundamental group(oid) of a one-vertex base on
// a graded fiber homology: an invertible block-diagonal degree-0 matrix per
// nondegenerate 1-simplex. Degenerate edges act as the identity, and every
// nondegenerate 2-simplex imposes rho(d1) = rho(d0) rho(d2).
class MonodromyRep {
  public:
    MonodromyRep() = default;
    MonodromyRep(ReducedSimplicialSet base, GradedModule fiber);

    const ReducedSimplicialSet& base() const { return base_; }
    const GradedModule& fiber() const { return fiber_; }

    // The action matrix is total-dimension square, block-diagonal by degree.
    void set_action(const std::string& edge_id, QMatrix total_matrix);
    QMatrix action(const std::string& edge_id) const;       // identity if unset
    QMatrix action(const SimplexElement& edge) const;       // identity on degenerates
    const std::map<std::string, QMatrix>& actions() const { return actions_; }

  private:
    ReducedSimplicialSet base_;
    GradedModule fiber_;
    std::map<std::string, QMatrix> actions_;
};

struct RepReport {
    bool ok = true;
    std::string message;
};

// Invertibility, block-diagonality by fiber degree, and the 2-simplex
// relations.
RepReport verify_rep(const MonodromyRep& rho);

struct UnipotentResult {
    bool unipotent = false;
    // The augmentation-ideal filtration W_0 = H over W_1 over ... over 0,
    // each given by a column basis in total coordinates (W_0 first).
    std::vector<QMatrix> filtration;
    // Stable nonzero subspace when not unipotent.
    QMatrix witness;
};

// W_{k+1} = sum_g (rho(g) - id)(W_k); unipotent iff the chain reaches zero.
UnipotentResult is_unipotent(const MonodromyRep& rho);

struct DegreeOneCochain {
    TwistingCochain phi;        // phi(edge) = rho(edge) - id, zero elsewhere
    bool identity_checked;      // base has 2-simplices, so the check ran
    TwistReport identity;       // verify_twisting outcome (informational)
};

// The degree-1 cochain of a monodromy action. The degree-1 part alone need
// not satisfy the twisting identity; the report says whether it does here.
DegreeOneCochain degree_one_cochain(const MonodromyRep& rho);

// Merge the degree-1 cochain of rho with user-supplied higher components and
// build the twisted tensor product with H. Refuses when the merged cochain
// fails the twisting identity; asserts chi = chi(base) * chi(H).
ChainComplex fibration_complex(const MonodromyRep& rho,
                               const std::map<std::string, EndElement>& higher = {});

// As above but also returns the merged cochain.
struct FibrationData {
    TwistingCochain phi;
    ChainComplex complex;
};
FibrationData fibration_data(const MonodromyRep& rho,
                             const std::map<std::string, EndElement>& higher = {});

struct SerreReport {
    bool sub_unipotent = false;
    bool quotient_unipotent = false;
    bool total_unipotent = false;
    bool consistent = false;  // total iff (sub and quotient)
};

// Restriction to an invariant graded subspace (per-degree column bases) and
// the induced quotient action; checks the two-out-of-three closure.
SerreReport serre_closure_check(const MonodromyRep& rho,
                                const std::map<int, QMatrix>& sub_bases);

}  // namespace qhom
