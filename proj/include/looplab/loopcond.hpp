#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "looplab/algebra.hpp"
#include "looplab/digraph.hpp"
#include "looplab/homsearch.hpp"

namespace looplab {

/// t(lhs) = t(rhs) over the named variables; tuple entries index `vars`.
struct LoopCondition {
    std::vector<std::string> vars;
    std::vector<std::size_t> lhs;
    std::vector<std::size_t> rhs;

    /// Throws InvalidParameter on undeclared names, duplicate variables or
    /// mismatched lengths.
    static LoopCondition from_names(std::vector<std::string> vars, const std::vector<std::string>& lhs,
                                    const std::vector<std::string>& rhs);

    std::size_t length() const { return lhs.size(); }
};

void validate_condition(const LoopCondition& c);

/// Nodes are the variables; edges (lhs_i, rhs_i), deduplicated.
Digraph condition_digraph(const LoopCondition& c);

/// Edge list read into lhs/rhs; variables are the node labels.
LoopCondition condition_from_digraph(const Digraph& g);

bool is_trivial(const LoopCondition& c);

std::optional<NodeMap> implies_by_hom(const LoopCondition& c1, const LoopCondition& c2);

// --- satisfaction --------------------------------------------------------------

enum class Verdict { yes, no, undecided };

std::string to_string(Verdict v);

enum class SatisfyStrategy {
    /// Grow a set of coordinates until a witness holds everywhere.
    refine,
    /// One closure over every coordinate.
    direct,
};

struct SatisfyOptions {
    ClosureCaps caps;
    SatisfyStrategy strategy = SatisfyStrategy::refine;
    Exec exec = Exec::parallel;
    /// Largest n^|vars| accepted.
    std::size_t max_assignments = std::size_t{1} << 22;
};

struct SatisfyStats {
    std::size_t elements = 0;          // final closure
    std::uint64_t applications = 0;    // all closures
    std::size_t closures = 0;
    std::size_t coordinates = 0;       // assignments in the final closure
    std::size_t assignments = 0;       // n^|vars|
};

struct SatisfactionResult {
    Verdict verdict = Verdict::undecided;
    /// Term over "p1".."pn" with t(lhs) = t(rhs); only for yes.
    std::optional<Term> witness;
    /// The witness with positions bound to lhs: the common value as a term
    /// over the condition's variables.
    std::optional<Term> value;
    std::vector<std::string> positions;
    std::string reason;
    SatisfyStats stats;
    /// Exhaustive identity check over all assignments.
    bool identity_verified = false;
    /// Term replay reproduced the diagonal element of the final closure.
    bool replay_verified = false;
};

/// Decides whether the variety generated by `a` satisfies `c`. Works in the
/// square of the free algebra on the condition's variables: the pairs
/// (x_i, y_i) generate a subuniverse, and the condition holds iff it meets
/// the diagonal. Yes always carries a witness that has been checked.
SatisfactionResult satisfies(const FiniteAlgebra& a, const LoopCondition& c, const SatisfyOptions& opts = {});

SatisfactionResult find_cyclic_term(const FiniteAlgebra& a, std::size_t n, const SatisfyOptions& opts = {});

/// Names "p1".."pn".
std::vector<std::string> position_names(std::size_t n);

/// Does t(x_1..x_n) = t(y_1..y_n) hold for every assignment?
bool verify_witness(const FiniteAlgebra& a, const LoopCondition& c, const Term& positional);

/// Do two terms over the same variables agree on every assignment?
bool terms_equivalent(const FiniteAlgebra& a, const Term& s, const Term& t, const std::vector<std::string>& vars);

// --- classification -------------------------------------------------------------

std::uint64_t rad(std::uint64_t n);

enum class ConditionClass { trivial, siggers, cyclic, unclassified };

std::string to_string(ConditionClass c);

struct Classification {
    bool trivial = false;
    bool strongly_connected = false;
    bool weakly_connected = false;
    AlgLength algebraic_length = AlgLength::infinity();
    ConditionClass cls = ConditionClass::unclassified;
    /// rad(al) for cyclic classes.
    std::uint64_t radical = 0;
    std::size_t strong_component_count = 0;
    /// Algebraic length of each nontrivial strong component.
    std::vector<AlgLength> component_lengths;
};

Classification classify_condition(const LoopCondition& c);

/// Known implication between classified conditions. Everything implies the
/// trivial class, a cyclic class implies Siggers, and cyclic(r1) implies
/// cyclic(r2) iff r2 divides r1. Nullopt when either side is unclassified.
std::optional<bool> class_implies(const Classification& stronger, const Classification& weaker);

// --- finite checks ----------------------------------------------------------------

/// Strict order on {0..m-1} preserved by the ternary median.
bool median_order_check(int m);

struct SimTransitivityReport {
    std::size_t universe = 0;
    std::size_t tuples = 0;
    std::size_t related_pairs = 0;  // ordered, reflexive pairs included
    bool transitive = false;
    bool successor_compatible = false;
    /// No non-constant tuple is related to its successor image.
    bool no_fixed_class = false;

    bool ok() const { return transitive && successor_compatible && no_fixed_class; }
};

/// Smallest reflexive symmetric relation on A^6 containing
/// (x,x,y,y,z,z) ~ (y,z,z,x,x,y), where A is a disjoint union of directed
/// cycles of the given lengths (each at least 2), and the successor map
/// along the cycles.
SimTransitivityReport sim_transitive_check(const std::vector<int>& cycle_lengths);

// --- catalog ------------------------------------------------------------------------

/// projections2, semilattice2, majority2, affine(p) for prime p <= 7, and
/// nu4 (4-ary near-unanimity on {0,1}).
FiniteAlgebra builtin_algebra(const std::string& name);

/// siggers6, siggers4, maltsev, cyclic(n), cone(n),
/// totally_symmetric_clique(m), sym_cycle_condition(n), dcp(a,b).
/// "name-n" is accepted for one-parameter names.
LoopCondition builtin_condition(const std::string& name);

std::vector<std::string> builtin_algebra_names();
std::vector<std::string> builtin_condition_examples();

LoopCondition cyclic_condition(std::size_t n);

/// "name", "name(a,b,...)" or "name-a-b"; throws ParseError.
struct NameCall {
    std::string name;
    std::vector<long> args;
};
NameCall parse_name_call(const std::string& text);

}  // namespace looplab
