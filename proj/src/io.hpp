#pragma once

#include <functional>

#include <json.hpp>

#include "monodromy.hpp"
#include "perturb.hpp"
#include "torsion.hpp"

namespace qhom {
namespace io {

using nlohmann::json;

// Parses a file or a JSON string; failures are Parse errors.
json load_json_file(const std::string& path);
json parse_json(const std::string& text);

json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);

json matrix_to_json(const QMatrix& m);
QMatrix matrix_from_json(const json& j);
// As above, but padding an absent/empty entry to the given shape.
QMatrix matrix_from_json_sized(const json& j, int rows, int cols);

// {"min_degree": int, "dims": [int], "differentials": {"n": [[rat]]}};
// the key "n" holds the boundary C_n -> C_{n-1}.
json complex_to_json(const ChainComplex& c);
ChainComplex complex_from_json(const json& j);

// Chain complex format plus optional {"basis": {"n": [[rat]]}}.
json based_complex_to_json(const BasedComplex& c);
BasedComplex based_complex_from_json(const json& j);

// {"simplices": {"dim": [{"id": str, "faces": [{"degen": [int],
//  "target": str}]}]}}; the unique 0-simplex must be named "pt".
json simplicial_to_json(const ReducedSimplicialSet& x);
ReducedSimplicialSet simplicial_from_json(const json& j);

using BaseResolver = std::function<ReducedSimplicialSet(const std::string&)>;

// {"base": ref, "fiber_dims": [int], "components": {"id": [[rat]]}} with each
// matrix the flat block map (+)H_q -> (+)H_(q+n-1) in ascending-degree order.
TwistingCochain cochain_from_json(const json& j, const BaseResolver& resolve);
json cochain_to_json(const TwistingCochain& phi, const std::string& base_ref);

// {"base": ref, "fiber_dims": [int], "action": {"edge": [[rat]]}} with
// block-diagonal degree-0 matrices; unlisted edges act as the identity.
MonodromyRep rep_from_json(const json& j, const BaseResolver& resolve);
json rep_to_json(const MonodromyRep& rho, const std::string& base_ref);

// {"t": {"n": [[rat]]}}: a degree -1 block map on a given big complex.
GradedMap perturbation_from_json(const json& j, const ChainComplex& big);
json perturbation_to_json(const GradedMap& t);

// Degree-indexed matrix family, used for SDR output ("j","r","h","d").
json graded_matrices_to_json(const std::map<int, QMatrix>& m);

json homology_to_json(const HomologyData& h);

// Resolves "builtin:<name>" to a library model, anything else as a path
// relative to base_dir (absolute paths pass through).
ReducedSimplicialSet resolve_base_ref(const std::string& ref, const std::string& base_dir);

}  // namespace io
}  // namespace qhom
