#pragma once

// Brute-force references used only by the tests. Each one avoids the
// algorithm it checks.

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "looplab/algebra.hpp"
#include "looplab/digraph.hpp"
#include "looplab/homsearch.hpp"

namespace oracle {

using looplab::Digraph;
using looplab::Element;
using looplab::NodeMap;

/// gcd of net displacements of closed oriented walks, found by search over
/// (node, displacement) states with |displacement| <= 2|V| + 2. 0 = infinite.
std::uint64_t cycle_gcd(const Digraph& g);

/// Every |T|^|S| map, in lexicographic order of the image vector.
std::vector<NodeMap> all_homs(const Digraph& s, const Digraph& t, std::size_t limit = SIZE_MAX);

bool reachable(const Digraph& g, looplab::NodeId from, looplab::NodeId to);

/// Every closed walk of each length up to max_n, by depth-first enumeration.
std::set<std::size_t> covering_walk_lengths(const Digraph& g, std::size_t max_n);

/// Applies every operation to the whole current set until nothing new appears.
std::set<std::vector<Element>> naive_closure(const looplab::FiniteAlgebra& a,
                                             const std::vector<std::vector<Element>>& gens);

/// Isomorphism by trying every permutation.
bool isomorphic_by_permutation(const Digraph& g, const Digraph& h);

/// Fixed corpus of random digraphs with at most `max_nodes` nodes and
/// `max_edges` edges.
std::vector<Digraph> random_corpus(std::size_t count, std::size_t max_nodes, std::size_t max_edges,
                                   std::uint32_t seed);

}  // namespace oracle
