#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace looplab {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Finite digraph with opaque string labels. Immutable once built: the
/// constructor sorts and deduplicates edges and builds adjacency lists.
class Digraph {
public:
    Digraph() = default;
    Digraph(std::vector<std::string> labels, std::vector<Edge> edges);

    /// Nodes labelled "0".."n-1".
    static Digraph with_indices(std::size_t n, std::vector<Edge> edges);

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(NodeId v) const { return labels_[v]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<NodeId>& out(NodeId v) const { return out_[v]; }
    const std::vector<NodeId>& in(NodeId v) const { return in_[v]; }

    bool has_edge(NodeId u, NodeId v) const;
    std::optional<NodeId> find(const std::string& label) const;

    friend bool operator==(const Digraph& a, const Digraph& b) {
        return a.labels_ == b.labels_ && a.edges_ == b.edges_;
    }

private:
    std::vector<std::string> labels_;
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
};

enum class BasicKind { clique, sym_cycle, dir_cycle, dir_path };

BasicKind parse_basic_kind(const std::string& name);
std::string to_string(BasicKind kind);

/// K_n, C_n, D_n, or the directed path 0 -> 1 -> ... -> n-1 standing in for Z.
Digraph make_basic(BasicKind kind, std::size_t n);

bool has_loop(const Digraph& g);

struct StrongComponent {
    std::vector<NodeId> nodes;
    /// Size at least two, or a single node carrying a loop.
    bool nontrivial = false;
};

/// Strongly connected components in topological order (sources first).
std::vector<StrongComponent> strong_components(const Digraph& g);

bool is_strongly_connected(const Digraph& g);

/// Components of the symmetrised edge relation, each sorted, ordered by
/// smallest member.
std::vector<std::vector<NodeId>> weak_components(const Digraph& g);

/// gcd of the algebraic lengths of all oriented cycles; infinite when they
/// all vanish (equivalently, the digraph maps to Z).
class AlgLength {
public:
    static AlgLength infinity() { return AlgLength{}; }
    static AlgLength finite(std::uint64_t v) { return AlgLength{v}; }

    bool is_infinite() const { return value_ == 0; }
    /// Only meaningful when finite.
    std::uint64_t value() const { return value_; }
    bool divisible_by(std::uint64_t n) const { return is_infinite() || value_ % n == 0; }
    std::string to_string() const;

    friend bool operator==(AlgLength, AlgLength) = default;

private:
    AlgLength() = default;
    explicit AlgLength(std::uint64_t v) : value_(v) {}
    // gcd identity: 0 encodes infinity
    std::uint64_t value_ = 0;
};

/// Integer potentials with p(v) = p(u) + 1 along a spanning forest of the
/// symmetrised digraph; roots get potential 0.
std::vector<std::int64_t> spanning_potentials(const Digraph& g);

/// Per weak component, the gcd of p(u) + 1 - p(v) over edges u -> v; the
/// result for the whole digraph is the gcd over components.
AlgLength algebraic_length(const Digraph& g);

/// Same node set; u -> v iff there is a directed walk of length exactly k.
Digraph relational_power(const Digraph& g, std::size_t k);

/// Labels are prefixed "0:" / "1:" to keep them apart.
Digraph disjoint_union(const Digraph& g, const Digraph& h);

/// Induced subdigraph on `nodes`, in the given order.
Digraph induced_subgraph(const Digraph& g, const std::vector<NodeId>& nodes);

struct IsoOptions {
    std::uint64_t max_expansions = 10'000'000;
};

/// Bijection g -> h preserving edges and non-edges, found by backtracking
/// with degree-profile pruning. Throws BudgetExceeded past the cap.
std::optional<std::vector<NodeId>> is_isomorphic(const Digraph& g, const Digraph& h,
                                                 const IsoOptions& opts = {});

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

}  // namespace looplab
