#include <CLI11.hpp>
#include <iostream>

#include "looplab/commands.hpp"

using namespace looplab;

namespace {

struct CapFlags {
    std::size_t max_elements = ClosureCaps{}.max_elements;
    std::uint64_t max_applications = ClosureCaps{}.max_applications;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("--max-elements", max_elements, "closure element cap")->capture_default_str();
        cmd->add_option("--max-applications", max_applications, "closure operation-application cap")
            ->capture_default_str();
    }
    ClosureCaps caps() const { return {max_elements, max_applications}; }
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"looplab: loop conditions, digraph families and lemma witnesses"};
    app.require_subcommand(1);
    long seed = 0;
    bool compact = false;
    app.add_option("--seed", seed, "accepted for interface stability; all algorithms are deterministic");
    app.add_flag("--compact", compact, "single-line JSON");
    app.fallthrough();

    std::function<CommandResult()> action;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a digraph (dcp a b | cclw k l c | clqp k l s | basic kind n)");
    std::string family;
    std::vector<std::string> gen_args;
    bool gen_stats = false, gen_full = false;
    gen->add_option("family", family)->required();
    gen->add_option("params", gen_args)->required();
    gen->add_flag("--stats", gen_stats, "add counts, algebraic length and components");
    gen->add_flag("--full", gen_full, "never summarize");
    gen->callback([&] { action = [&] { return cmd_generate(family, gen_args, gen_stats, gen_full); }; });

    // hom
    auto* hom = app.add_subcommand("hom", "homomorphism search between digraphs (files, '-' or names like dcp(2,3))");
    std::string source;
    std::optional<std::string> target;
    HomCommandOptions hopts;
    hom->add_option("source", source)->required();
    hom->add_option("target", target);
    hom->add_option("--pins", hopts.pins, "JSON {\"map\": [...]} with nulls for free nodes");
    hom->add_option("--enumerate", hopts.enumerate, "list up to N homomorphisms");
    hom->add_option("--cycle-target", hopts.cycle_target, "map to the directed cycle D_n");
    hom->add_option("--edge-surjective", hopts.edge_surjective, "closed-walk lengths up to N covering all edges");
    hom->add_option("--max-backtracks", hopts.budget.max_backtracks)->capture_default_str();
    hom->callback([&] {
        action = [&] {
            const auto src = resolve_digraph(source);
            std::optional<Digraph> tgt;
            if (target) tgt = resolve_digraph(*target);
            return cmd_hom(src, tgt, hopts);
        };
    });

    // check
    auto* check = app.add_subcommand("check", "decide whether an algebra satisfies a loop condition");
    std::string algebra_spec, condition_spec, strategy = "refine";
    bool serial = false;
    CapFlags check_caps;
    check->add_option("algebra", algebra_spec)->required();
    check->add_option("condition", condition_spec)->required();
    check->add_option("--strategy", strategy, "refine or direct")
        ->check(CLI::IsMember({"refine", "direct"}))
        ->capture_default_str();
    check->add_flag("--serial", serial, "use the serial closure kernel");
    check_caps.attach(check);
    check->callback([&] {
        action = [&] {
            SatisfyOptions o;
            o.caps = check_caps.caps();
            o.strategy = strategy == "direct" ? SatisfyStrategy::direct : SatisfyStrategy::refine;
            o.exec = serial ? Exec::serial : Exec::parallel;
            return cmd_check(resolve_algebra(algebra_spec), resolve_condition(condition_spec), o);
        };
    });

    // classify
    auto* classify = app.add_subcommand("classify", "triviality, connectivity, algebraic length and class");
    classify->add_option("condition", condition_spec)->required();
    classify->callback([&] { action = [&] { return cmd_classify(resolve_condition(condition_spec)); }; });

    // verify
    auto* verify = app.add_subcommand("verify", "rebuild and check a witness construction");
    std::string lemma;
    VerifyParams vp;
    CapFlags verify_caps;
    verify->add_option("lemma", lemma)->required()->check(CLI::IsMember(verify_lemmas()));
    verify->add_option("--k", vp.k);
    verify->add_option("--l", vp.l);
    verify->add_option("--s", vp.s);
    verify->add_option("--c", vp.c);
    verify->add_option("--a", vp.a);
    verify->add_option("--b", vp.b);
    verify->add_option("--max-n", vp.max_n);
    verify->add_option("--m", vp.m);
    verify->add_option("--search-k", vp.search_k, "cclw-dcp: also search homomorphisms for small k");
    bool verify_serial = false;
    verify->add_flag("--serial", verify_serial, "use serial kernels");
    verify->add_flag("--full", vp.full, "never summarize");
    verify_caps.attach(verify);
    verify->callback([&] {
        action = [&] {
            vp.exec = verify_serial ? Exec::serial : Exec::parallel;
            vp.satisfy.exec = vp.exec;
            vp.satisfy.caps = verify_caps.caps();
            return cmd_verify(lemma, vp);
        };
    });

    // alg free
    auto* alg = app.add_subcommand("alg", "algebra inspection");
    alg->require_subcommand(1);
    auto* free = alg->add_subcommand("free", "free algebra on g generators");
    std::size_t g = 1;
    bool free_full = false;
    CapFlags free_caps;
    free->add_option("algebra", algebra_spec)->required();
    free->add_option("g", g)->required();
    free->add_flag("--full", free_full, "list every element");
    free_caps.attach(free);
    free->callback([&] {
        action = [&] { return cmd_alg_free(resolve_algebra(algebra_spec), g, free_caps.caps(), free_full); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const auto result = run_guarded(action);
    std::cout << result.payload.dump(compact ? -1 : 2) << "\n";
    std::cerr << result.summary << "\n";
    return result.exit;
}
