#pragma once

#include <string>

#include <json.hpp>

#include "mdiag/algebra.hpp"
#include "mdiag/diagonal.hpp"
#include "mdiag/geometry.hpp"
#include "mdiag/operad.hpp"
#include "mdiag/trees.hpp"

namespace mdiag::io {

using Json = nlohmann::ordered_json;

// {"n": 3, "nests": [{"edges": [1, 2], "color": "p"}, ...]}; uncolored nests
// carry no "color" key.
Json to_json(const Nesting& N);
Nesting nesting_from_json(const Json& j, Kind k);

Json to_json(const SignedPair& p, bool with_sign);
Json to_json(const RatPoint& p);

// [{"coef": 1, "term": "b(**) (x) p(**)"}, ...]
Json to_json(const op::FormalSum& x);
op::FormalSum formal_sum_from_json(const Json& j);

// {"complex": {"basis": [{"name", "degree"}], "d": [[coef, from, to]]},
//  "ops": {"m2": [[coef, in..., out]], ...}, "cap": 4}.  Basis references
// are names or indices.  The structure is checked before it is returned.
Json to_json(const alg::AInfAlgebra& A);
alg::Alg algebra_from_json(const Json& j);
Json to_json(const alg::MultiMap& F);

Json read_json_file(const std::string& path);
// Bundled data: MDIAG_DATA_DIR when set, else the source data directory.
std::string data_dir();
const Json& printed_data();
const Json& expected_counts();

}  // namespace mdiag::io
