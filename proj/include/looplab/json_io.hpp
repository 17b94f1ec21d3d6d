#pragma once

#include <json.hpp>

#include "looplab/algebra.hpp"
#include "looplab/digraph.hpp"
#include "looplab/homsearch.hpp"
#include "looplab/loopcond.hpp"

namespace looplab {

using Json = nlohmann::ordered_json;

// Readers throw ParseError on malformed input.

/// {"nodes": [labels], "edges": [[i, j], ...]}, 0-based indices.
Json to_json(const Digraph& g);
Digraph digraph_from_json(const Json& j);

/// {"map": [t_0, t_1, ...]}
Json hom_to_json(const NodeMap& map);
NodeMap hom_from_json(const Json& j);
/// Same shape; null leaves a node free.
std::vector<std::optional<NodeId>> pins_from_json(const Json& j);

/// {"size": n, "ops": [{"name", "arity", "table"}]}
Json to_json(const FiniteAlgebra& a);
FiniteAlgebra algebra_from_json(const Json& j);

/// {"op": name, "args": [...]} or {"var": name}
Json to_json(const Term& t);
Term term_from_json(const Json& j);

/// {"vars": [...], "lhs": [...], "rhs": [...]} with variable names.
Json to_json(const LoopCondition& c);
LoopCondition condition_from_json(const Json& j);

Json to_json(const SatisfactionResult& r);
Json to_json(const Classification& k);

}  // namespace looplab
