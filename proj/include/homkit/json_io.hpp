#pragma once

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "homkit/classify.hpp"
#include "homkit/gadgets.hpp"
#include "homkit/interpolation.hpp"
#include "homkit/matrix.hpp"
#include "homkit/multigraph.hpp"
#include "homkit/partition.hpp"

namespace homkit {

using json = nlohmann::json;

// Graph: {"n": int, "edges": [[u,v],...], "rotation": {"<v>": [darts]}?}
json graph_to_json(const MultiGraph& g,
                   const std::optional<RotationSystem>& rot = std::nullopt);
std::pair<MultiGraph, std::optional<RotationSystem>> graph_from_json(const json& j);

// Matrix: {"q": int, "entries": [["p/q",...],...]}; integers may omit "/1".
json matrix_to_json(const WeightMatrix& m);
WeightMatrix matrix_from_json(const json& j);

json ratmatrix_to_json(const RatMatrix& m);

// Profile: {"counts": [["<rational>","<bigint>"],...], "total": "<bigint>"}
json profile_to_json(const CountProfile& p);

// Gadget: graph JSON plus {"l1": v, "l2": v}.
json gadget_to_json(const EdgeGadget& k);
EdgeGadget gadget_from_json(const json& j);

// Transcript: {"construction", "matrix", "z", "queries":[{"graph","value"}],
//              "nodes", "solution", "result", "scale"}
json transcript_to_json(const ReductionTranscript& t);
ReductionTranscript transcript_from_json(const json& j);

json verdict_to_json(const Verdict& v);
json separator_to_json(const SeparatorResult& r);
json orbits_to_json(const OrbitResult& r);
json predicates_to_json(const PredicateReport& r);

// Parses with a byte-offset diagnostic on failure.
json parse_json(const std::string& text, const std::string& where);

}  // namespace homkit
