#pragma once

#include "twist.hpp"

namespace qhom {

// A graded map of fixed degree shift between two complexes, stored as
// per-degree matrices src.dim(n) -> tgt.dim(n + shift). Used for SDR
// contractions (shift +1) and perturbations (shift -1).
struct GradedMap {
    int shift = 0;
    std::map<int, QMatrix> comps;

    QMatrix at(int n, const ChainComplex& src, const ChainComplex& tgt) const;
};

// Strong deformation retraction data: r j = id, d h + h d = id - j r,
// with the side conditions h j = 0, r h = 0, h h = 0.
struct Sdr {
    ChainComplex big;
    ChainComplex small;
    ChainMap j;     // small -> big
    ChainMap r;     // big -> small
    GradedMap h;    // degree +1 on big
};

struct SdrReport {
    bool ok = true;
    std::string identity;  // which identity failed: "j", "r", "rj", "homotopy", "hj", "rh", "hh"
    int degree = 0;
};

// Checks all five SDR identities (and that j, r are chain maps) degreewise.
SdrReport verify_sdr(const Sdr& s);

// Enforces the side conditions on raw data satisfying only r j = id and
// d h + h d = id - j r, via h' = (id - jr) h (id - jr), then h'' = h' d h'.
// Idempotent on already-normalized input.
Sdr normalize_side_conditions(const ChainComplex& big, const ChainComplex& small,
                              const ChainMap& j, const ChainMap& r, const GradedMap& h);

// Deterministic SDR of a complex onto its homology (zero differential),
// built from the leftmost-pivot image/kernel splittings.
Sdr homology_sdr(const ChainComplex& c);

struct Perturbation {
    Sdr base;
    GradedMap t;  // degree -1 on big, with (d + t)^2 = 0
};

struct BplResult {
    Sdr perturbed;          // big differential d + t, small differential d_inf
    int nilpotency_power;   // smallest k with (h t)^k = 0
};

// Basic Perturbation Lemma. With S = sum_k (h t)^k (a finite sum by
// nilpotency), the transferred data is
//   d_inf = d_small + r t S j,  j_inf = S j,
//   r_inf = r sum_k (t h)^k,    h_inf = h sum_k (t h)^k.
// Refuses perturbations whose (h t) powers fail to vanish within
// dim(big) + 1 steps, reporting the smallest non-vanishing power; verifies
// the output SDR and d_inf^2 = 0.
BplResult basic_perturbation(const Perturbation& p);

// The data produced by transferring a perturbation of C'(X) (x) F down to
// C'(X) (x) H_*(F).
struct TransferContext {
    ReducedSimplicialSet base;
    ChainComplex fiber_model;
    ChainComplex big;       // untwisted C'(X) (x) F
    GradedMap t;
    TwistingCochain phi;    // extracted twisting cochain
    ChainComplex twisted;   // C'(X) (x)_phi H, equal to the transferred d_inf
    Sdr sdr;                // perturbed SDR between them
};

// Runs the BPL against id (x) homology_sdr(fiber_model) and reads the
// twisting cochain off the transferred differential. Requires t to lower the
// base filtration degree by at least one and (d+t)^2 = 0; the extracted
// cochain must pass verify_twisting and reproduce d_inf exactly.
TransferContext transferred_twisting(const ReducedSimplicialSet& base,
                                     const ChainComplex& fiber_model, const GradedMap& t);

// g_inf = r_inf_q after (id (x) g) after j_inf_p between two twisted tensor
// products over the same base. Checked to be a chain map; preserves the
// homological filtration and induces id (x) H(g) on its quotients.
ChainMap induced_map_infinity(const ChainMap& g_fiber, const TransferContext& ctx_p,
                              const TransferContext& ctx_q);

// Helpers shared with tests: the untwisted tensor C'(X) (x) F in twisted
// layout order, and the SDR id (x) s with the Koszul sign on the contraction.
ChainComplex base_tensor_fiber(const ReducedSimplicialSet& base, const ChainComplex& fiber);
Sdr tensor_sdr(const ReducedSimplicialSet& base, const Sdr& fiber_sdr);

}  // namespace qhom
