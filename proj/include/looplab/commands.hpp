#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "looplab/json_io.hpp"

namespace looplab {

/// 0 positive, 1 negative, 2 undecided or over budget, 3 usage or I/O.
enum ExitCode : int { kExitPositive = 0, kExitNegative = 1, kExitUndecided = 2, kExitUsage = 3 };

struct CommandResult {
    int exit = kExitPositive;
    Json payload;
    std::string summary;
};

/// Outputs with more entries than this are sampled unless `full` is set.
constexpr std::size_t kDumpThreshold = 100'000;

// Input resolution: "-" reads JSON from stdin, an existing path is read as a
// JSON file, anything else is looked up as a builtin name. Throw ParseError
// or InvalidParameter.
Json read_json_source(const std::string& spec);
Digraph resolve_digraph(const std::string& spec);
FiniteAlgebra resolve_algebra(const std::string& spec);
LoopCondition resolve_condition(const std::string& spec);

/// "dcp(a,b)", "cclw(k,l,c)", "clqp(k,l,s)", or a basic kind with its size,
/// e.g. "dir_cycle(6)".
Digraph named_digraph(const std::string& name);

/// family: dcp a b | cclw k l c | clqp k l s | basic <kind> n
CommandResult cmd_generate(const std::string& family, const std::vector<std::string>& args, bool stats, bool full);

struct HomCommandOptions {
    std::optional<std::string> pins;  // JSON source
    std::optional<std::size_t> enumerate;
    std::optional<std::size_t> cycle_target;
    std::optional<std::size_t> edge_surjective;
    HomOptions budget;
};

/// `target` may be absent for --cycle-target and --edge-surjective.
CommandResult cmd_hom(const Digraph& source, const std::optional<Digraph>& target, const HomCommandOptions& opts);

CommandResult cmd_check(const FiniteAlgebra& a, const LoopCondition& c, const SatisfyOptions& opts);

CommandResult cmd_classify(const LoopCondition& c);

struct VerifyParams {
    std::optional<long> k, l, s, c, a, b, max_n, m, search_k;
    Exec exec = Exec::parallel;
    SatisfyOptions satisfy;
    bool full = false;
};

std::vector<std::string> verify_lemmas();

CommandResult cmd_verify(const std::string& lemma, const VerifyParams& p);

CommandResult cmd_alg_free(const FiniteAlgebra& a, std::size_t g, const ClosureCaps& caps, bool full);

/// Maps library exceptions onto the exit-code contract.
CommandResult run_guarded(const std::function<CommandResult()>& body);

}  // namespace looplab
