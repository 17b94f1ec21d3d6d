#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "looplab/digraph.hpp"
#include "looplab/families.hpp"

namespace looplab {

using Element = std::uint8_t;

/// Universe sizes are limited so elements fit in one byte.
constexpr std::size_t kMaxUniverse = 256;

struct Operation {
    std::string name;
    int arity = 0;
    /// Row-major: entry for (x_1..x_k) sits at sum x_i * n^(k-i).
    std::vector<Element> table;

    Element apply(std::span<const Element> args, std::size_t n) const;
};

struct FiniteAlgebra {
    std::size_t size = 0;
    std::vector<Operation> ops;

    const Operation* find(const std::string& name) const;
};

struct AlgebraReport {
    std::vector<std::string> errors;
    /// Per operation; informational.
    std::vector<bool> idempotent;

    bool ok() const { return errors.empty(); }
};

AlgebraReport validate_algebra(const FiniteAlgebra& a);

/// Throws InvalidParameter with the first error.
void require_valid(const FiniteAlgebra& a);

/// Tabulate an operation from a function of its arguments.
Operation make_operation(std::string name, int arity, std::size_t n,
                         const std::function<Element(std::span<const Element>)>& f);

/// Does every operation map edge-tuples of g (universe = node indices) to edges?
bool is_compatible(const FiniteAlgebra& a, const Digraph& g);

// --- terms ----------------------------------------------------------------

/// Immutable term; subterms are shared, so extracted witnesses stay
/// DAG-sized even when their tree form is large.
class Term {
public:
    static Term var(std::string name);
    static Term apply(std::string op, std::vector<Term> args);

    bool is_var() const { return node_->is_var; }
    const std::string& name() const { return node_->name; }
    const std::vector<Term>& args() const { return node_->args; }
    const void* id() const { return node_.get(); }

    friend bool operator==(const Term& a, const Term& b);

private:
    struct Node {
        bool is_var;
        std::string name;
        std::vector<Term> args;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

std::string to_string(const Term& t);

/// Number of nodes in the expanded tree, saturating at `cap`.
std::uint64_t tree_size(const Term& t, std::uint64_t cap = std::uint64_t{1} << 62);

/// Distinct variable names, sorted.
std::vector<std::string> variables(const Term& t);

/// Simultaneous substitution of variables.
Term substitute(const Term& t, const std::map<std::string, Term>& sub);

/// Throws InvalidParameter on an unbound variable, unknown operation or
/// arity mismatch.
Element eval_term(const FiniteAlgebra& a, const Term& t, const std::map<std::string, Element>& env);

/// Coordinatewise evaluation: every variable is bound to a tuple of the
/// given width.
std::vector<Element> eval_term_columns(const FiniteAlgebra& a, const Term& t,
                                       const std::map<std::string, std::vector<Element>>& env,
                                       std::size_t width);

// --- subpower closure --------------------------------------------------------

struct ClosureCaps {
    std::size_t max_elements = 100'000;
    std::uint64_t max_applications = 100'000'000;
};

enum class ClosureStatus { closed, witness_found, cap_exceeded };

std::string to_string(ClosureStatus s);

/// Generated subuniverse of A^width with one derivation per element.
class SubpowerTrace {
public:
    static constexpr int kGenerator = -1;

    struct Provenance {
        int op = kGenerator;        // index into op_names, or kGenerator
        std::uint32_t ref = 0;      // generator index, or offset into the argument pool
    };

    SubpowerTrace() = default;
    SubpowerTrace(std::size_t width, std::vector<std::string> op_names, std::vector<int> arities);

    std::size_t width() const { return width_; }
    std::size_t size() const { return prov_.size(); }
    std::span<const Element> element(std::size_t i) const
    {
        return {data_.data() + i * width_, width_};
    }
    const Provenance& provenance(std::size_t i) const { return prov_[i]; }
    std::span<const std::uint32_t> arguments(std::size_t i) const;
    const std::string& op_name(int op) const { return op_names_[static_cast<std::size_t>(op)]; }
    std::optional<std::size_t> find(std::span<const Element> tuple) const;

    /// Appends when new; returns the index and whether it was inserted.
    std::pair<std::size_t, bool> intern(std::span<const Element> tuple, Provenance p,
                                        std::span<const std::uint32_t> args = {});

private:
    std::size_t hash_of(std::span<const Element> t) const;
    void grow();

    std::size_t width_ = 0;
    std::vector<std::string> op_names_;
    std::vector<int> arities_;
    std::vector<Element> data_;
    std::vector<Provenance> prov_;
    std::vector<std::uint32_t> arg_pool_;
    std::vector<std::size_t> hashes_;
    std::vector<std::uint32_t> table_;  // open addressing; 0 = empty, else index + 1
};

using TuplePredicate = std::function<bool(std::span<const Element>)>;

struct ClosureResult {
    SubpowerTrace trace;
    ClosureStatus status = ClosureStatus::closed;
    std::optional<std::size_t> witness;
    std::uint64_t applications = 0;
};

/// Closure of the generators under all operations applied coordinatewise.
/// Elements are processed in index order; element j is combined with every
/// argument tuple over elements 0..j that uses j, so each tuple is tried
/// exactly once. Nullary operations are applied once after the generators.
/// Stops at the first element (generators included) satisfying `stop`.
/// The parallel path batches the innermost argument and interns results in
/// enumeration order, so both paths produce identical traces.
ClosureResult subpower_closure(const FiniteAlgebra& a, std::size_t width,
                               const std::vector<std::vector<Element>>& generators,
                               const TuplePredicate& stop = {}, const ClosureCaps& caps = {},
                               Exec exec = Exec::parallel);

/// Coordinates of the free algebra on g generators: all assignments
/// A^g in lexicographic order, generator 0 most significant.
std::vector<std::vector<Element>> projection_generators(std::size_t n, std::size_t g);

/// The g-generated free algebra of the variety of `a`, realised as the
/// subalgebra of A^(A^g) generated by the projections.
ClosureResult free_algebra(const FiniteAlgebra& a, std::size_t g, const ClosureCaps& caps = {},
                           Exec exec = Exec::parallel);

/// Unwinds provenance into a term over `generator_names`.
Term extract_term(const SubpowerTrace& trace, std::size_t index, const std::vector<std::string>& generator_names);

/// Evaluates `t` coordinatewise with generator i bound to trace element i's
/// generator tuple and compares with element `index`.
bool replay_matches(const FiniteAlgebra& a, const SubpowerTrace& trace, std::size_t index, const Term& t,
                    const std::vector<std::string>& generator_names,
                    const std::vector<std::vector<Element>>& generators);

}  // namespace looplab
