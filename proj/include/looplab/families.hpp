#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "looplab/digraph.hpp"
#include "looplab/homsearch.hpp"

namespace looplab {

/// Sequence (a_1, l_1, a_2, ..., l_{k-1}, a_k). Separator 0 is NONE, j >= 1 is
/// the loop symbol L_j.
struct FamilyNode {
    std::vector<int> letters;
    std::vector<int> separators;

    friend bool operator==(const FamilyNode&, const FamilyNode&) = default;
    friend auto operator<=>(const FamilyNode&, const FamilyNode&) = default;
};

constexpr int kNone = 0;

/// "0|.|1|L1|1": letters and separators interleaved, "." for NONE.
std::string encode(const FamilyNode& node);
FamilyNode decode_family_node(const std::string& text);

/// Length-k prefix / suffix of a (k+1)-letter node.
FamilyNode prefix(const FamilyNode& node);
FamilyNode suffix(const FamilyNode& node);

/// Node i of `graph` is nodes[i]; nodes are sorted so lookups bisect.
struct FamilyGraph {
    Digraph graph;
    std::vector<FamilyNode> nodes;

    std::optional<NodeId> find(const FamilyNode& node) const;
};

/// A_0..A_{a-1}, then B_1..B_{b-1}; A_0 doubles as B_0.
Digraph dcp(std::size_t a, std::size_t b);

/// Node index in dcp(a, b) of A_i and B_j.
NodeId dcp_a(std::size_t a, std::size_t b, std::size_t i);
NodeId dcp_b(std::size_t a, std::size_t b, std::size_t j);

bool is_cclw_node(const FamilyNode& node, int loop_symbols, int cycle);
bool is_clqp_node(const FamilyNode& node, int loop_symbols, int alphabet);

/// Valid nodes with k letters, sorted by (letters, separators).
std::vector<FamilyNode> cclw_nodes(int k, int loop_symbols, int cycle);
std::vector<FamilyNode> clqp_nodes(int k, int loop_symbols, int alphabet);

FamilyGraph cclw(int k, int loop_symbols, int cycle);
FamilyGraph clqp(int k, int loop_symbols, int alphabet);

/// CLQP(k,0,s) -> CLQP(k+1,s,1), (a_1..a_k) -> (x, L_{a_1+1}, x, ..., L_{a_k+1}, x).
struct RaiseIso {
    FamilyGraph from, to;
    NodeMap map;
};

/// Throws VerificationFailed unless the map is an isomorphism.
RaiseIso clqp_raise_iso(int k, int s);

/// One H-edge u_p -> u_q of a reduce lemma, realised as a homomorphism from
/// the edge template (base copy 0, the part carrying the last loop symbol,
/// base copy 1) into the target digraph.
struct ReducePair {
    int from = 0, to = 0;
    Digraph edge_template;
    NodeMap map;
};

struct ReduceWitness {
    FamilyGraph big;     // CLQP(k,l,s) or CCLW(k,l,c)
    FamilyGraph base;    // the same family with l-1 loop symbols
    FamilyGraph target;  // CLQP(k,l-1,3s) or CCLW(k,l-1,c)
    /// Vertex-template maps base -> target, one per alphabet embedding.
    std::vector<NodeMap> embeddings;
    std::vector<ReducePair> pairs;
};

/// Triangle u_1, u_2, u_3 of alphabet embeddings with disjoint images.
ReduceWitness clqp_reduce_witness(int k, int l, int s);

/// Cycle of rotations u_x(a) = a + x mod c, edges between x and x +- 1.
ReduceWitness cclw_reduce_witness(int k, int l, int c);

/// Nodes of CLQP(k,l,1) are nodes of CCLW(k,l,c) (letter 0 in both). Returns
/// true when the node sets embed and the induced edges coincide.
bool clqp_embeds_in_cclw(int k, int l, int c);

// --- CCLW(6c+1, 0, c) -> DCP(2, c) ---------------------------------------

/// Image in dcp(2, c) of the window (a_{-3c}..a_{3c}) under the local rule.
/// Throws VerificationFailed if the rule ever needs a border position.
NodeId cclw_dcp_image(std::span<const int> window, int c);

using WindowMap = std::function<NodeId(std::span<const int>, int)>;

enum class Exec { serial, parallel };

struct CclwDcpReport {
    int c = 0;
    int k = 0;                       // windows have 2k + 1 letters
    std::uint64_t walks_checked = 0; // (2k + 2)-letter walks = edges
    std::uint64_t violations = 0;
    /// Least violating walk index and its letters.
    std::optional<std::uint64_t> first_violation;
    std::vector<int> counterexample;
    /// Which dcp(2,c) nodes occur as images.
    std::vector<bool> image_hit;

    bool ok() const { return violations == 0; }
};

/// Streams every (2k+2)-letter walk on C_c and checks the images of its
/// prefix and suffix windows are adjacent in dcp(2, c). k = 3c.
CclwDcpReport verify_cclw_to_dcp(int c, Exec exec = Exec::parallel, const WindowMap& rule = {});

/// Letters of walk number `index` with `length` letters on C_c: start letter
/// then one bit per step (0 = -1, 1 = +1), most significant first.
std::vector<int> decode_walk(std::uint64_t index, int length, int c);

}  // namespace looplab
