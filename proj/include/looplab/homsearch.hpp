#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "looplab/digraph.hpp"

namespace looplab {

using NodeMap = std::vector<NodeId>;

/// Source and target digraphs plus an optional partial pin map
/// (pins[v] fixes the image of source node v).
struct HomProblem {
    const Digraph& source;
    const Digraph& target;
    std::vector<std::optional<NodeId>> pins = {};
};

struct HomOptions {
    std::uint64_t max_backtracks = 50'000'000;
};

enum class HomStatus { found, none, budget_exceeded };

struct HomResult {
    HomStatus status = HomStatus::none;
    NodeMap map;
    std::uint64_t backtracks = 0;

    explicit operator bool() const { return status == HomStatus::found; }
};

/// Backtracking with arc consistency on the edge constraint and fail-first
/// variable order (smallest domain, then lowest index); values ascending.
HomResult find_hom(const HomProblem& p, const HomOptions& opts = {});

/// True iff `map` is total and sends every g-edge to an h-edge.
bool verify_hom(const Digraph& g, const Digraph& h, const NodeMap& map);

/// Up to `limit` homomorphisms in lexicographic order of the image vector.
/// Throws BudgetExceeded past the backtrack cap.
std::vector<NodeMap> enumerate_homs(const HomProblem& p, std::size_t limit,
                                    const HomOptions& opts = {});

/// Map v -> potential(v) mod n when every edge residual vanishes mod n.
std::optional<NodeMap> hom_to_dir_cycle(const Digraph& g, std::size_t n);

struct EdgeSurjectiveOptions {
    std::size_t max_edges = 20;
};

/// All n <= max_n such that some closed directed walk of length n uses
/// every edge. Dynamic programming over (node, covered-edge mask) layered
/// by walk length. Throws InvalidParameter when the edge cap is exceeded.
std::set<std::size_t> edge_surjective_cycle_lengths(const Digraph& g, std::size_t max_n,
                                                    const EdgeSurjectiveOptions& opts = {});

/// Digraph template for a pp-construction: nodes of the result are the
/// homomorphisms `vertex_template -> g`; u -> w iff some homomorphism
/// e: edge_template -> g has u = e . phi0 and w = e . phi1.
struct PpTemplate {
    Digraph vertex_template;
    Digraph edge_template;
    NodeMap phi0, phi1;
};

Digraph pp_construct(const PpTemplate& t, const Digraph& g, std::size_t node_limit = 100'000,
                     const HomOptions& opts = {});

NodeMap compose(const NodeMap& first, const NodeMap& second);

}  // namespace looplab
