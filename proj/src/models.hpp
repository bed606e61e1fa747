#pragma once

#include "simplicial.hpp"

namespace qhom {
namespace models {

// Minimal circle: one vertex "pt", one edge "e".
ReducedSimplicialSet circle();

// Minimal 2-sphere (Delta^2 with its boundary collapsed): one vertex, one
// nondegenerate 2-simplex whose faces are all the degenerate edge.
ReducedSimplicialSet sphere2();

// One-vertex torus: edges a, b, c and triangles T1, T2 with
// dT1 = b - c + a and dT2 = a - c + b.
ReducedSimplicialSet torus();

// One-vertex Klein bottle: same 1-skeleton, dT1 = b - c + a, dT2 = c - b + a.
ReducedSimplicialSet klein_bottle();

// Simplicial chains of the boundary of the 4-simplex (an S^3); used as an
// independent homology oracle, not a reduced simplicial set.
ChainComplex boundary_delta4_chains();

// A 4-dimensional based chain model of the circle: homology representatives
// in degrees 0 and 1 plus one contractible pair (d a1 = b0).
// Basis order: degree 0 = (z0, b0), degree 1 = (z1, a1).
ChainComplex circle_fiber_model();

struct NamedModel {
    std::string name;
    ReducedSimplicialSet set;
    std::vector<int> expected_betti;  // from degree 0 up
};

// Every built-in reduced model with its expected Betti numbers, for
// self-tests and the examples gallery.
std::vector<NamedModel> all_models();

ReducedSimplicialSet by_name(const std::string& name);

}  // namespace models
}  // namespace qhom
