#pragma once

#include <json.hpp>

#include "monodromy.hpp"

namespace qhom {
namespace gallery {

// Built-in worked examples. Every expected value is recomputed from an
// independent oracle in the same run (simplicial homology of a Delta-model,
// a Kunneth tensor product, or a plain determinant), never stored as a bare
// constant.
std::vector<std::string> names();

// Runs one entry; the report records the computed values, the oracle values,
// and whether they agree.
nlohmann::json run_entry(const std::string& name);

// Runs all entries; report has one sub-object per entry plus a global "ok".
nlohmann::json run_all();

// Inputs backing the twisted entries, shared with the CLI and tests.
MonodromyRep torus_rep();         // S^1 base, H(S^1), trivial action
MonodromyRep klein_rep();         // S^1 base, action -1 on H_1
FibrationData hopf_fibration();   // S^2 base, Hopf cochain on the 2-simplex
MonodromyRep trivial_s2_rep();    // S^2 base, trivial action

}  // namespace gallery
}  // namespace qhom
