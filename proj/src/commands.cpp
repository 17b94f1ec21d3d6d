#include "looplab/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>

#include "looplab/errors.hpp"
#include "looplab/families.hpp"

namespace looplab {

namespace {

bool looks_like_file(const std::string& spec)
{
    std::error_code ec;
    return spec == "-" || std::filesystem::is_regular_file(spec, ec);
}

long to_long(const std::string& s)
{
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw ParseError("not an integer: '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("not an integer: '" + s + "'");
    }
}

int small_int(long v, const char* what)
{
    if (v < 0 || v > 1'000'000) throw InvalidParameter(std::string(what) + " out of range");
    return static_cast<int>(v);
}

Json stats_of(const Digraph& g)
{
    return Json{{"nodes", g.node_count()},
                {"edges", g.edge_count()},
                {"algebraic_length", algebraic_length(g).to_string()},
                {"strong_components", strong_components(g).size()},
                {"weak_components", weak_components(g).size()},
                {"has_loop", has_loop(g)}};
}

Json digraph_payload(const Digraph& g, bool stats, bool full)
{
    Json out;
    if (g.node_count() > kDumpThreshold && !full) {
        Json sample = Json::array();
        for (std::size_t i = 0; i < 20; ++i) sample.push_back(g.label(static_cast<NodeId>(i)));
        out = Json{{"summarized", true}, {"sample_nodes", sample}};
        stats = true;
    } else {
        out = to_json(g);
    }
    if (stats) out["stats"] = stats_of(g);
    return out;
}

std::string count_summary(const Digraph& g)
{
    return std::to_string(g.node_count()) + " nodes, " + std::to_string(g.edge_count()) + " edges";
}

long param(const std::optional<long>& v, long fallback) { return v ? *v : fallback; }

Json labelled_map(const Digraph& from, const Digraph& to, const NodeMap& map, bool full)
{
    Json out = Json::array();
    const std::size_t limit = full ? map.size() : std::min<std::size_t>(map.size(), 64);
    for (std::size_t v = 0; v < limit; ++v) {
        out.push_back({from.label(static_cast<NodeId>(v)), to.label(map[v])});
    }
    return out;
}

CommandResult verified(Json payload, std::string summary)
{
    payload["verified"] = true;
    return {kExitPositive, std::move(payload), std::move(summary)};
}

CommandResult failed(Json payload, std::string summary)
{
    payload["verified"] = false;
    return {kExitNegative, std::move(payload), std::move(summary)};
}

// --- verifiers ----------------------------------------------------------------

CommandResult verify_clqp_raise(const VerifyParams& p)
{
    const int k = small_int(param(p.k, 1), "k");
    const int s = small_int(param(p.s, 3), "s");
    const auto r = clqp_raise_iso(k, s);
    // Independent pass: bijection, then edges in both directions.
    NodeMap inverse(r.to.nodes.size(), static_cast<NodeId>(-1));
    bool bijective = r.map.size() == r.to.nodes.size();
    for (NodeId v = 0; bijective && v < r.map.size(); ++v) {
        if (r.map[v] >= inverse.size() || inverse[r.map[v]] != static_cast<NodeId>(-1)) bijective = false;
        else inverse[r.map[v]] = v;
    }
    const bool ok = bijective && verify_hom(r.from.graph, r.to.graph, r.map) &&
                    verify_hom(r.to.graph, r.from.graph, inverse);
    Json payload{{"lemma", "clqp-raise"},
                 {"k", k},
                 {"s", s},
                 {"from", stats_of(r.from.graph)},
                 {"to", stats_of(r.to.graph)},
                 {"isomorphism", labelled_map(r.from.graph, r.to.graph, r.map, p.full)}};
    const auto what = "CLQP(" + std::to_string(k) + ",0," + std::to_string(s) + ") ~ CLQP(" + std::to_string(k + 1) +
                      "," + std::to_string(s) + ",1), " + count_summary(r.from.graph);
    return ok ? verified(payload, "verified isomorphism " + what) : failed(payload, "isomorphism check failed " + what);
}

CommandResult verify_reduce(const VerifyParams& p, bool clqp_family)
{
    const int k = small_int(param(p.k, 2), "k");
    const int l = small_int(param(p.l, 1), "l");
    const int third = clqp_family ? small_int(param(p.s, 2), "s") : small_int(param(p.c, 3), "c");
    const auto w = clqp_family ? clqp_reduce_witness(k, l, third) : cclw_reduce_witness(k, l, third);
    bool ok = true;
    for (const auto& e : w.embeddings) ok = ok && verify_hom(w.base.graph, w.target.graph, e);
    Json pairs = Json::array();
    for (const auto& pr : w.pairs) {
        const bool good = verify_hom(pr.edge_template, w.target.graph, pr.map);
        ok = ok && good;
        pairs.push_back(Json{{"from", pr.from},
                             {"to", pr.to},
                             {"template_nodes", pr.edge_template.node_count()},
                             {"template_edges", pr.edge_template.edge_count()},
                             {"verified", good}});
    }
    const std::string family = clqp_family ? "CLQP" : "CCLW";
    const std::string params = std::to_string(k) + "," + std::to_string(l) + "," + std::to_string(third);
    Json payload{{"lemma", clqp_family ? "clqp-reduce" : "cclw-reduce"},
                 {"k", k},
                 {"l", l},
                 {clqp_family ? "s" : "c", third},
                 {"big", stats_of(w.big.graph)},
                 {"base", stats_of(w.base.graph)},
                 {"target", stats_of(w.target.graph)},
                 {"embeddings", w.embeddings.size()},
                 {"pairs", pairs}};
    const auto what = family + "(" + params + "): " + std::to_string(w.embeddings.size()) + " embeddings, " +
                      std::to_string(w.pairs.size()) + " edge witnesses";
    return ok ? verified(payload, "verified " + what) : failed(payload, "reduce witness failed " + what);
}

CommandResult verify_cclw_dcp(const VerifyParams& p)
{
    const int c = small_int(param(p.c, 3), "c");
    if (c < 3 || c % 2 == 0) throw InvalidParameter("cclw-dcp needs an odd c >= 3");
    const auto rep = verify_cclw_to_dcp(c, p.exec);
    const auto target = dcp(2, static_cast<std::size_t>(c));
    const int len = 6 * c + 2;

    // Independent spot check against the materialised target.
    const std::uint64_t stride = std::max<std::uint64_t>(1, rep.walks_checked / 4096) | 1;
    std::uint64_t spot = 0;
    bool spot_ok = true;
    Json samples = Json::array();
    for (std::uint64_t idx = 0; idx < rep.walks_checked; idx += stride, ++spot) {
        const auto walk = decode_walk(idx, len, c);
        std::span<const int> letters(walk);
        const auto u = cclw_dcp_image(letters.first(walk.size() - 1), c);
        const auto v = cclw_dcp_image(letters.subspan(1), c);
        if (!target.has_edge(u, v)) spot_ok = false;
        if (samples.size() < 8) {
            FamilyNode node{{letters.begin(), letters.end() - 1}, std::vector<int>(walk.size() - 2, kNone)};
            samples.push_back(Json{{"node", encode(node)}, {"image", target.label(u)}});
        }
    }
    const bool onto = std::all_of(rep.image_hit.begin(), rep.image_hit.end(), [](bool b) { return b; });
    Json payload{{"lemma", "cclw-dcp"},
                 {"c", c},
                 {"k", rep.k},
                 {"walks_checked", rep.walks_checked},
                 {"violations", rep.violations},
                 {"onto", onto},
                 {"spot_checked", spot},
                 {"samples", samples}};
    if (rep.first_violation) {
        payload["first_violation"] = *rep.first_violation;
        payload["counterexample"] = rep.counterexample;
    }
    if (p.search_k) {
        const long kmax = *p.search_k;
        if (kmax < 1 || kmax > 6) throw InvalidParameter("--search-k must be in 1..6");
        Json tried = Json::array();
        for (int k = 1; k <= kmax; ++k) {
            const auto g = cclw(2 * k + 1, 0, c);
            const auto r = find_hom({g.graph, target, {}}, {5'000'000});
            std::string status = r.status == HomStatus::found ? "found"
                                 : r.status == HomStatus::none ? "none"
                                                               : "budget_exceeded";
            if (r.status == HomStatus::found && !verify_hom(g.graph, target, r.map)) status = "invalid";
            tried.push_back(Json{{"k", k}, {"nodes", g.graph.node_count()}, {"status", status}});
        }
        payload["search"] = tried;
    }
    const auto what = "CCLW(" + std::to_string(2 * rep.k + 1) + ",0," + std::to_string(c) + ") -> DCP(2," +
                      std::to_string(c) + "), " + std::to_string(rep.walks_checked) + " walks";
    if (rep.ok() && spot_ok) return verified(payload, "verified " + what);
    return failed(payload, std::to_string(rep.violations) + " violations in " + what);
}

CommandResult verify_cycle_cover(const VerifyParams& p)
{
    const auto a = static_cast<std::size_t>(small_int(param(p.a, 2), "a"));
    const auto b = static_cast<std::size_t>(small_int(param(p.b, 3), "b"));
    const auto max_n = static_cast<std::size_t>(small_int(param(p.max_n, 20), "max-n"));
    if (a < 1 || b < 1 || max_n < 1) throw InvalidParameter("cycle-cover needs a, b, max-n >= 1");
    const auto g = dcp(a, b);
    const auto lengths = edge_surjective_cycle_lengths(g, max_n);
    const auto al = algebraic_length(g);
    const bool only_multiples = std::all_of(lengths.begin(), lengths.end(), [&](std::size_t n) { return !al.is_infinite() && n % al.value() == 0; });
    // Smallest t with every multiple of al in [t, max_n] present.
    std::size_t threshold = max_n + 1;
    if (!al.is_infinite()) {
        for (std::size_t n = max_n; n >= 1; --n) {
            if (n % al.value() != 0) continue;
            if (!lengths.count(n)) break;
            threshold = n;
        }
    }
    Json payload{{"lemma", "cycle-cover"},
                 {"a", a},
                 {"b", b},
                 {"max_n", max_n},
                 {"algebraic_length", al.to_string()},
                 {"lengths", lengths},
                 {"only_multiples", only_multiples},
                 {"all_multiples_from", threshold}};
    const auto what = "DCP(" + std::to_string(a) + "," + std::to_string(b) + "), al " + al.to_string() +
                      ", every multiple present from " + std::to_string(threshold);
    if (only_multiples && threshold <= max_n) return verified(payload, "verified " + what);
    return failed(payload, "cycle cover check failed for " + what);
}

CommandResult verify_equiv_suite(const VerifyParams& p)
{
    const std::vector<std::string> algebras{"projections2", "semilattice2", "majority2", "affine(2)", "affine(3)"};
    const std::vector<std::string> conditions{"siggers6", "siggers4", "sym_cycle_condition(5)", "dcp(2,3)",
                                              "totally_symmetric_clique(3)"};
    Json rows = Json::array();
    bool uniform = true, decided = true;
    std::string table;
    for (const auto& an : algebras) {
        const auto a = builtin_algebra(an);
        Json cells = Json::object();
        std::optional<Verdict> first;
        bool row_uniform = true;
        std::string line = an + ":";
        for (const auto& cn : conditions) {
            const auto r = satisfies(a, builtin_condition(cn), p.satisfy);
            if (r.verdict == Verdict::undecided) decided = false;
            if (r.verdict == Verdict::yes && !(r.identity_verified && r.replay_verified)) {
                throw VerificationFailed("unverified witness for " + an + " / " + cn);
            }
            if (!first) first = r.verdict;
            if (r.verdict != *first) row_uniform = false;
            cells[cn] = to_string(r.verdict);
            line += " " + to_string(r.verdict);
        }
        uniform = uniform && row_uniform;
        rows.push_back(Json{{"algebra", an}, {"verdicts", cells}, {"uniform", row_uniform}});
        table += line + (row_uniform ? "" : " (mixed)") + "\n";
    }
    Json payload{{"lemma", "equiv-suite"}, {"conditions", conditions}, {"rows", rows}};
    if (!decided) {
        payload["verified"] = false;
        return {kExitUndecided, payload, table + "some verdicts undecided"};
    }
    return uniform ? verified(payload, table + "every row uniform") : failed(payload, table + "a row is mixed");
}

CommandResult verify_example2(const VerifyParams& p)
{
    const int m = small_int(param(p.m, 10), "m");
    const bool ok = median_order_check(m);
    Json payload{{"lemma", "example2"}, {"m", m}, {"median_preserves_order", ok}};
    const auto what = "median preserves < on {0.." + std::to_string(m - 1) + "}";
    return ok ? verified(payload, "verified " + what) : failed(payload, "failed: " + what);
}

CommandResult verify_sim_transitive(const VerifyParams&)
{
    const auto rep = sim_transitive_check({2, 3});
    Json payload{{"lemma", "sim-transitive"},
                 {"cycles", {2, 3}},
                 {"universe", rep.universe},
                 {"tuples", rep.tuples},
                 {"related_pairs", rep.related_pairs},
                 {"transitive", rep.transitive},
                 {"successor_compatible", rep.successor_compatible},
                 {"no_fixed_class", rep.no_fixed_class}};
    const auto what = std::to_string(rep.tuples) + " six-tuples, " + std::to_string(rep.related_pairs) + " related pairs";
    return rep.ok() ? verified(payload, "verified transitive and successor-compatible: " + what)
                    : failed(payload, "relation check failed: " + what);
}

}  // namespace

Json read_json_source(const std::string& spec)
{
    try {
        if (spec == "-") return Json::parse(std::cin);
        std::ifstream in(spec);
        if (!in) throw ParseError("cannot open '" + spec + "'");
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid JSON in '" + spec + "': " + e.what());
    }
}

Digraph named_digraph(const std::string& name)
{
    const auto call = parse_name_call(name);
    auto need = [&](std::size_t n) {
        if (call.args.size() != n) throw InvalidParameter("'" + call.name + "' takes " + std::to_string(n) + " parameter(s)");
    };
    if (call.name == "dcp") {
        need(2);
        if (call.args[0] < 1 || call.args[1] < 1) throw InvalidParameter("dcp(a,b) needs a, b >= 1");
        return dcp(static_cast<std::size_t>(call.args[0]), static_cast<std::size_t>(call.args[1]));
    }
    if (call.name == "cclw" || call.name == "clqp") {
        need(3);
        const int k = small_int(call.args[0], "k"), l = small_int(call.args[1], "l"), t = small_int(call.args[2], "parameter");
        if (k < 1 || t < 1) throw InvalidParameter(call.name + " needs k >= 1 and a positive third parameter");
        return call.name == "cclw" ? cclw(k, l, t).graph : clqp(k, l, t).graph;
    }
    need(1);
    if (call.args[0] < 1) throw InvalidParameter("size must be positive");
    return make_basic(parse_basic_kind(call.name), static_cast<std::size_t>(call.args[0]));
}

Digraph resolve_digraph(const std::string& spec)
{
    return looks_like_file(spec) ? digraph_from_json(read_json_source(spec)) : named_digraph(spec);
}

FiniteAlgebra resolve_algebra(const std::string& spec)
{
    return looks_like_file(spec) ? algebra_from_json(read_json_source(spec)) : builtin_algebra(spec);
}

LoopCondition resolve_condition(const std::string& spec)
{
    return looks_like_file(spec) ? condition_from_json(read_json_source(spec)) : builtin_condition(spec);
}

CommandResult cmd_generate(const std::string& family, const std::vector<std::string>& args, bool stats, bool full)
{
    Digraph g;
    std::string name;
    if (family == "basic") {
        if (args.size() != 2) throw InvalidParameter("gen basic <kind> <n>");
        name = args[0] + "(" + args[1] + ")";
    } else if (family == "dcp" || family == "cclw" || family == "clqp") {
        name = family + "(";
        for (std::size_t i = 0; i < args.size(); ++i) name += (i ? "," : "") + std::to_string(to_long(args[i]));
        name += ")";
    } else {
        throw InvalidParameter("unknown family '" + family + "'");
    }
    g = named_digraph(name);
    return {kExitPositive, digraph_payload(g, stats, full), name + ": " + count_summary(g)};
}

CommandResult cmd_hom(const Digraph& source, const std::optional<Digraph>& target, const HomCommandOptions& opts)
{
    if (opts.edge_surjective) {
        const auto lengths = edge_surjective_cycle_lengths(source, *opts.edge_surjective);
        Json payload{{"lengths", lengths}, {"algebraic_length", algebraic_length(source).to_string()}};
        std::string list;
        for (auto n : lengths) list += (list.empty() ? "" : ",") + std::to_string(n);
        return {lengths.empty() ? kExitNegative : kExitPositive, payload, "edge-surjective closed walk lengths: {" + list + "}"};
    }
    if (opts.cycle_target) {
        if (*opts.cycle_target < 1) throw InvalidParameter("--cycle-target must be positive");
        const auto map = hom_to_dir_cycle(source, *opts.cycle_target);
        const auto cycle = make_basic(BasicKind::dir_cycle, *opts.cycle_target);
        if (!map) return {kExitNegative, Json{{"found", false}}, "no homomorphism to D_" + std::to_string(*opts.cycle_target)};
        if (!verify_hom(source, cycle, *map)) throw VerificationFailed("cycle map failed verification");
        Json payload = hom_to_json(*map);
        payload["found"] = true;
        return {kExitPositive, payload, "homomorphism to D_" + std::to_string(*opts.cycle_target) + " found"};
    }
    if (!target) throw InvalidParameter("a target digraph is required");
    std::vector<std::optional<NodeId>> pins;
    if (opts.pins) pins = pins_from_json(read_json_source(*opts.pins));
    HomProblem problem{source, *target, pins};
    if (opts.enumerate) {
        const auto maps = enumerate_homs(problem, *opts.enumerate, opts.budget);
        Json list = Json::array();
        for (const auto& m : maps) {
            if (!verify_hom(source, *target, m)) throw VerificationFailed("enumerated map failed verification");
            list.push_back(m);
        }
        return {maps.empty() ? kExitNegative : kExitPositive, Json{{"count", maps.size()}, {"maps", list}},
                std::to_string(maps.size()) + " homomorphism(s)"};
    }
    const auto r = find_hom(problem, opts.budget);
    if (r.status == HomStatus::budget_exceeded) {
        return {kExitUndecided, Json{{"found", nullptr}, {"backtracks", r.backtracks}}, "search budget exceeded"};
    }
    if (r.status == HomStatus::none) {
        return {kExitNegative, Json{{"found", false}, {"backtracks", r.backtracks}}, "no homomorphism"};
    }
    if (!verify_hom(source, *target, r.map)) throw VerificationFailed("found map failed verification");
    Json payload = hom_to_json(r.map);
    payload["found"] = true;
    payload["backtracks"] = r.backtracks;
    return {kExitPositive, payload, "homomorphism found"};
}

CommandResult cmd_check(const FiniteAlgebra& a, const LoopCondition& c, const SatisfyOptions& opts)
{
    const auto r = satisfies(a, c, opts);
    Json payload = to_json(r);
    payload["condition"] = to_json(c);
    switch (r.verdict) {
        case Verdict::yes: {
            // Re-check before reporting, independently of the decider.
            if (!verify_witness(a, c, *r.witness)) throw VerificationFailed("witness failed re-verification");
            const auto size = tree_size(*r.witness);
            return {kExitPositive, payload,
                    "yes: " + (size <= 200 ? to_string(*r.witness) : "witness with " + std::to_string(size) + " nodes")};
        }
        case Verdict::no: return {kExitNegative, payload, "no: " + r.reason};
        case Verdict::undecided: return {kExitUndecided, payload, "undecided: " + r.reason};
    }
    return {kExitUsage, payload, "?"};
}

CommandResult cmd_classify(const LoopCondition& c)
{
    const auto k = classify_condition(c);
    Json payload = to_json(k);
    payload["condition"] = to_json(c);
    std::string summary = std::string(k.trivial ? "trivial" : "nontrivial") + ", " +
                          (k.strongly_connected ? "strongly connected" : "not strongly connected") + ", al " +
                          k.algebraic_length.to_string() + ", " + to_string(k.cls);
    if (k.cls == ConditionClass::cyclic) summary += " (rad " + std::to_string(k.radical) + ")";
    return {kExitPositive, payload, summary};
}

std::vector<std::string> verify_lemmas()
{
    return {"clqp-raise", "clqp-reduce", "cclw-reduce", "cclw-dcp", "cycle-cover", "equiv-suite", "example2", "sim-transitive"};
}

CommandResult cmd_verify(const std::string& lemma, const VerifyParams& p)
{
    if (lemma == "clqp-raise") return verify_clqp_raise(p);
    if (lemma == "clqp-reduce") return verify_reduce(p, true);
    if (lemma == "cclw-reduce") return verify_reduce(p, false);
    if (lemma == "cclw-dcp") return verify_cclw_dcp(p);
    if (lemma == "cycle-cover") return verify_cycle_cover(p);
    if (lemma == "equiv-suite") return verify_equiv_suite(p);
    if (lemma == "example2") return verify_example2(p);
    if (lemma == "sim-transitive") return verify_sim_transitive(p);
    throw InvalidParameter("unknown verifier '" + lemma + "'");
}

CommandResult cmd_alg_free(const FiniteAlgebra& a, std::size_t g, const ClosureCaps& caps, bool full)
{
    if (g < 1) throw InvalidParameter("need at least one generator");
    const auto r = free_algebra(a, g, caps);
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= g; ++i) names.push_back("x" + std::to_string(i));
    const std::size_t limit = full ? r.trace.size() : std::min<std::size_t>(r.trace.size(), 1000);
    Json elements = Json::array();
    for (std::size_t i = 0; i < limit; ++i) {
        const auto t = extract_term(r.trace, i, names);
        const auto tup = r.trace.element(i);
        Json e{{"index", i}, {"tuple", std::vector<int>(tup.begin(), tup.end())}};
        if (tree_size(t, 10'001) <= 10'000) e["term"] = to_string(t);
        elements.push_back(std::move(e));
    }
    Json payload{{"size", r.trace.size()},
                 {"generators", names},
                 {"coordinates", r.trace.width()},
                 {"status", to_string(r.status)},
                 {"applications", r.applications},
                 {"elements", elements}};
    if (limit < r.trace.size()) payload["summarized"] = true;
    if (r.status == ClosureStatus::cap_exceeded) {
        return {kExitUndecided, payload, "cap exceeded after " + std::to_string(r.trace.size()) + " elements"};
    }
    return {kExitPositive, payload, "|F| = " + std::to_string(r.trace.size())};
}

CommandResult run_guarded(const std::function<CommandResult()>& body)
{
    auto error = [](int code, const std::string& kind, const std::string& msg) {
        return CommandResult{code, Json{{"error", kind}, {"message", msg}}, kind + ": " + msg};
    };
    try {
        return body();
    } catch (const BudgetExceeded& e) {
        return error(kExitUndecided, "budget exceeded", e.what());
    } catch (const VerificationFailed& e) {
        return error(kExitNegative, "verification failed", e.what());
    } catch (const ParseError& e) {
        return error(kExitUsage, "parse error", e.what());
    } catch (const InvalidParameter& e) {
        return error(kExitUsage, "invalid parameter", e.what());
    } catch (const std::exception& e) {
        return error(kExitUsage, "error", e.what());
    }
}

}  // namespace looplab
