#include <doctest.h>

#include "looplab/errors.hpp"
#include "looplab/loopcond.hpp"

using namespace looplab;

namespace {

const std::vector<std::string> kAlgebras{"projections2", "semilattice2", "majority2", "affine(2)", "affine(3)", "nu4"};

Term p(int i) { return Term::var("p" + std::to_string(i)); }

LoopCondition trivial_pair() { return LoopCondition::from_names({"x", "y"}, {"x", "y"}, {"x", "x"}); }

std::vector<std::pair<std::string, LoopCondition>> catalog_conditions()
{
    std::vector<std::pair<std::string, LoopCondition>> out;
    for (const auto& n : builtin_condition_examples()) out.emplace_back(n, builtin_condition(n));
    out.emplace_back("trivial pair", trivial_pair());
    return out;
}

}  // namespace

TEST_CASE("condition digraphs")
{
    CHECK(is_isomorphic(condition_digraph(builtin_condition("siggers6")), make_basic(BasicKind::clique, 3)));
    const auto s4 = condition_digraph(builtin_condition("siggers4"));
    CHECK(s4.node_count() == 3);
    CHECK(s4.edge_count() == 4);
    const auto r = *s4.find("r"), a = *s4.find("a"), e = *s4.find("e");
    CHECK(s4.has_edge(r, a));
    CHECK(s4.has_edge(a, r));
    CHECK(s4.has_edge(r, e));
    CHECK(s4.has_edge(e, a));
    for (std::size_t n = 1; n <= 7; ++n) {
        CHECK(is_isomorphic(condition_digraph(cyclic_condition(n)), make_basic(BasicKind::dir_cycle, n)));
    }
    CHECK(is_isomorphic(condition_digraph(builtin_condition("sym_cycle_condition(5)")),
                        make_basic(BasicKind::sym_cycle, 5)));
    CHECK(is_isomorphic(condition_digraph(builtin_condition("totally_symmetric_clique(4)")),
                        make_basic(BasicKind::clique, 4)));
    CHECK(is_isomorphic(condition_digraph(builtin_condition("dcp(2,3)")), dcp(2, 3)));

    const auto cone2 = condition_digraph(builtin_condition("cone(2)"));
    CHECK(cone2.node_count() == 4);
    CHECK(cone2.edge_count() == 5);
    const auto c1 = *cone2.find("c1"), c2 = *cone2.find("c2"), ca = *cone2.find("a"), cb = *cone2.find("b");
    CHECK(cone2.has_edge(c1, c2));
    CHECK(cone2.has_edge(c2, c1));
    CHECK(cone2.has_edge(ca, c1));
    CHECK(cone2.has_edge(ca, c2));
    CHECK(cone2.has_edge(cb, ca));
}

TEST_CASE("condition validation and parsing")
{
    CHECK_THROWS_AS(LoopCondition::from_names({"x"}, {"x"}, {"y"}), InvalidParameter);
    CHECK_THROWS_AS(LoopCondition::from_names({"x", "x"}, {"x"}, {"x"}), InvalidParameter);
    CHECK_THROWS_AS(LoopCondition::from_names({"x", "y"}, {"x", "y"}, {"x"}), InvalidParameter);
    CHECK_THROWS_AS(LoopCondition::from_names({"x"}, {}, {}), InvalidParameter);
    CHECK_THROWS(builtin_condition("nonsense"));
    CHECK_THROWS(builtin_condition("cyclic(x)"));
    CHECK(builtin_condition("cyclic-4").length() == 4);
    CHECK(parse_name_call("dcp(2,3)").args == std::vector<long>{2, 3});
    CHECK(parse_name_call("dcp-2-3").args == std::vector<long>{2, 3});
    CHECK(parse_name_call("siggers6").args.empty());
    CHECK_THROWS_AS(parse_name_call("dcp(2,"), ParseError);
}

TEST_CASE("triviality")
{
    CHECK(is_trivial(trivial_pair()));
    CHECK_FALSE(is_trivial(builtin_condition("siggers6")));
    CHECK(is_trivial(cyclic_condition(1)));
    for (const auto& [name, c] : catalog_conditions()) {
        CHECK(is_trivial(c) == has_loop(condition_digraph(c)));
    }
}

TEST_CASE("implication by homomorphism")
{
    CHECK(implies_by_hom(cyclic_condition(6), cyclic_condition(3)));
    CHECK_FALSE(implies_by_hom(cyclic_condition(3), cyclic_condition(6)));
    const auto h = implies_by_hom(builtin_condition("siggers4"), builtin_condition("siggers6"));
    REQUIRE(h);
    CHECK(verify_hom(condition_digraph(builtin_condition("siggers4")), condition_digraph(builtin_condition("siggers6")), *h));
    // Anything maps into a loop.
    CHECK(implies_by_hom(builtin_condition("maltsev"), trivial_pair()));
}

TEST_CASE("satisfaction examples")
{
    const auto maj = satisfies(builtin_algebra("majority2"), builtin_condition("siggers6"));
    CHECK(maj.verdict == Verdict::yes);
    REQUIRE(maj.witness);
    CHECK(maj.identity_verified);
    CHECK(maj.replay_verified);
    CHECK(verify_witness(builtin_algebra("majority2"), builtin_condition("siggers6"), *maj.witness));

    const auto proj = satisfies(builtin_algebra("projections2"), builtin_condition("siggers6"));
    CHECK(proj.verdict == Verdict::no);
    CHECK_FALSE(proj.witness);
    CHECK(satisfies(builtin_algebra("affine(2)"), cyclic_condition(2)).verdict == Verdict::no);

    const auto a2 = builtin_algebra("affine(2)");
    const auto c3 = find_cyclic_term(a2, 3);
    REQUIRE(c3.verdict == Verdict::yes);
    CHECK(terms_equivalent(a2, *c3.witness, Term::apply("m", {p(1), p(2), p(3)}), position_names(3)));

    const auto sl = builtin_algebra("semilattice2");
    const auto s3 = find_cyclic_term(sl, 3);
    REQUIRE(s3.verdict == Verdict::yes);
    CHECK(terms_equivalent(sl, *s3.witness, Term::apply("min", {p(1), Term::apply("min", {p(2), p(3)})}),
                           position_names(3)));
    CHECK(find_cyclic_term(builtin_algebra("affine(3)"), 3).verdict == Verdict::no);
    CHECK(find_cyclic_term(builtin_algebra("affine(3)"), 2).verdict == Verdict::yes);
    CHECK(to_string(Verdict::undecided) == "undecided");
}

TEST_CASE("radical law on affine algebras")
{
    for (std::size_t pr : {2, 3}) {
        const auto a = builtin_algebra("affine(" + std::to_string(pr) + ")");
        for (std::size_t n = 2; n <= 6; ++n) {
            const auto r = find_cyclic_term(a, n);
            CHECK(r.verdict == (n % pr != 0 ? Verdict::yes : Verdict::no));
            if (r.verdict == Verdict::yes) CHECK(r.replay_verified);
        }
    }
}

TEST_CASE("witness soundness and triviality over the catalog")
{
    const auto proj = builtin_algebra("projections2");
    for (const auto& an : kAlgebras) {
        const auto a = builtin_algebra(an);
        for (const auto& [cn, c] : catalog_conditions()) {
            CAPTURE(an);
            CAPTURE(cn);
            const auto r = satisfies(a, c);
            CHECK(r.verdict != Verdict::undecided);
            if (r.verdict == Verdict::yes) {
                REQUIRE(r.witness);
                CHECK(r.identity_verified);
                CHECK(r.replay_verified);
                CHECK(verify_witness(a, c, *r.witness));
                // The common value is the witness applied to the left-hand side.
                std::vector<std::string> lhs_names;
                for (auto i : c.lhs) lhs_names.push_back(c.vars[i]);
                std::map<std::string, Term> sub;
                for (std::size_t i = 0; i < lhs_names.size(); ++i) sub.emplace(r.positions[i], Term::var(lhs_names[i]));
                CHECK(terms_equivalent(a, *r.value, substitute(*r.witness, sub), c.vars));
            }
            if (an == "projections2") CHECK((r.verdict == Verdict::yes) == is_trivial(c));
        }
    }
}

TEST_CASE("implication is monotone over the catalog")
{
    const auto conds = catalog_conditions();
    for (const auto& an : kAlgebras) {
        const auto a = builtin_algebra(an);
        std::vector<Verdict> v;
        for (const auto& [cn, c] : conds) v.push_back(satisfies(a, c).verdict);
        for (std::size_t i = 0; i < conds.size(); ++i) {
            for (std::size_t j = 0; j < conds.size(); ++j) {
                if (v[i] == Verdict::yes && implies_by_hom(conds[i].second, conds[j].second)) {
                    CAPTURE(an);
                    CAPTURE(conds[i].first);
                    CAPTURE(conds[j].first);
                    CHECK(v[j] == Verdict::yes);
                }
            }
        }
    }
}

TEST_CASE("Maltsev and near-unanimity consequences")
{
    for (const auto& an : {"affine(2)", "affine(3)"}) {
        const auto a = builtin_algebra(an);
        for (const auto& cn : {"maltsev", "cone(2)", "cone(3)"}) {
            CAPTURE(an);
            CAPTURE(cn);
            CHECK(satisfies(a, builtin_condition(cn)).verdict == Verdict::yes);
        }
    }
    const auto a2 = builtin_algebra("affine(2)");
    const auto m = satisfies(a2, builtin_condition("maltsev"));
    REQUIRE(m.witness);
    CHECK(terms_equivalent(a2, *m.witness, Term::apply("m", {p(1), p(2), p(3)}), position_names(3)));
    const auto maj = builtin_algebra("majority2");
    for (const auto& cn : {"cone(2)", "cone(3)"}) CHECK(satisfies(maj, builtin_condition(cn)).verdict == Verdict::yes);
    CHECK(satisfies(builtin_algebra("nu4"), builtin_condition("cone(2)")).verdict == Verdict::yes);
}

TEST_CASE("refine and direct strategies agree")
{
    SatisfyOptions direct;
    direct.strategy = SatisfyStrategy::direct;
    for (const auto& an : {"projections2", "semilattice2", "majority2", "affine(2)", "affine(3)"}) {
        const auto a = builtin_algebra(an);
        for (const auto& cn : {"siggers6", "siggers4", "maltsev", "cyclic(2)", "cyclic(3)", "cone(2)"}) {
            CAPTURE(an);
            CAPTURE(cn);
            const auto c = builtin_condition(cn);
            const auto d = satisfies(a, c, direct);
            CHECK(d.verdict == satisfies(a, c).verdict);
            if (d.witness) CHECK(verify_witness(a, c, *d.witness));
        }
    }
}

TEST_CASE("caps give undecided, never no")
{
    SatisfyOptions tight;
    tight.caps.max_elements = 3;
    const auto r = satisfies(builtin_algebra("majority2"), builtin_condition("cone(3)"), tight);
    CHECK(r.verdict == Verdict::undecided);
    CHECK_FALSE(r.reason.empty());
    SatisfyOptions tiny;
    tiny.max_assignments = 4;
    const auto over = satisfies(builtin_algebra("majority2"), builtin_condition("siggers6"), tiny);
    CHECK(over.verdict == Verdict::undecided);
    CHECK_FALSE(over.reason.empty());
}

TEST_CASE("serial and parallel satisfaction agree")
{
    SatisfyOptions serial;
    serial.exec = Exec::serial;
    const auto a = builtin_algebra("majority2");
    const auto c = builtin_condition("cone(3)");
    const auto s = satisfies(a, c, serial), q = satisfies(a, c);
    CHECK(s.verdict == q.verdict);
    REQUIRE(s.witness);
    REQUIRE(q.witness);
    CHECK(to_string(*s.witness) == to_string(*q.witness));
    CHECK(s.stats.applications == q.stats.applications);
}

TEST_CASE("radicals")
{
    CHECK(rad(12) == 6);
    CHECK(rad(8) == 2);
    CHECK(rad(1) == 1);
    CHECK(rad(30) == 30);
    CHECK(rad(49) == 7);
}

TEST_CASE("classification")
{
    const auto s6 = classify_condition(builtin_condition("siggers6"));
    CHECK(s6.strongly_connected);
    CHECK(s6.algebraic_length == AlgLength::finite(1));
    CHECK(s6.cls == ConditionClass::siggers);
    CHECK(to_string(s6.cls) == "SIGGERS");

    const auto c12 = classify_condition(cyclic_condition(12));
    CHECK(c12.cls == ConditionClass::cyclic);
    CHECK(c12.radical == 6);
    for (std::size_t n : {6, 18}) {
        const auto other = classify_condition(cyclic_condition(n));
        CHECK(class_implies(c12, other) == true);
        CHECK(class_implies(other, c12) == true);
    }
    const auto c4 = classify_condition(cyclic_condition(4));
    CHECK(class_implies(c12, c4) == true);
    CHECK(class_implies(c4, c12) == false);
    CHECK(class_implies(c12, s6) == true);
    CHECK(class_implies(s6, c12) == false);

    const auto mal = classify_condition(builtin_condition("maltsev"));
    CHECK_FALSE(mal.strongly_connected);
    CHECK(mal.weakly_connected);
    CHECK(mal.algebraic_length == AlgLength::finite(1));
    CHECK(mal.cls == ConditionClass::unclassified);
    CHECK_FALSE(class_implies(mal, s6).has_value());

    const auto tr = classify_condition(trivial_pair());
    CHECK(tr.cls == ConditionClass::trivial);
    CHECK(class_implies(s6, tr) == true);
    CHECK(class_implies(tr, s6) == false);

    for (const auto& cn : {"siggers4", "sym_cycle_condition(5)", "dcp(2,3)", "totally_symmetric_clique(3)"}) {
        CHECK(classify_condition(builtin_condition(cn)).cls == ConditionClass::siggers);
    }
    CHECK(classify_condition(builtin_condition("cone(3)")).cls == ConditionClass::unclassified);
}

TEST_CASE("class implication matches the satisfaction checker on cyclic conditions")
{
    // Affine algebras separate cyclic classes exactly by divisibility.
    for (std::size_t pr : {2, 3}) {
        const auto a = builtin_algebra("affine(" + std::to_string(pr) + ")");
        for (std::size_t n1 = 2; n1 <= 6; ++n1) {
            for (std::size_t n2 = 2; n2 <= 6; ++n2) {
                const auto k1 = classify_condition(cyclic_condition(n1));
                const auto k2 = classify_condition(cyclic_condition(n2));
                if (class_implies(k1, k2) == true && find_cyclic_term(a, n1).verdict == Verdict::yes) {
                    CHECK(find_cyclic_term(a, n2).verdict == Verdict::yes);
                }
            }
        }
    }
}

TEST_CASE("median preserves the strict order")
{
    CHECK(median_order_check(2));
    CHECK(median_order_check(5));
    CHECK(median_order_check(10));
    CHECK_THROWS_AS(median_order_check(1), InvalidParameter);
    CHECK_THROWS_AS(median_order_check(31), InvalidParameter);
}

TEST_CASE("similarity relation on products of cycles")
{
    const auto r = sim_transitive_check({2, 3});
    CHECK(r.universe == 5);
    CHECK(r.tuples == 15625);
    CHECK(r.transitive);
    CHECK(r.successor_compatible);
    CHECK(r.no_fixed_class);
    CHECK(r.ok());
    CHECK(r.related_pairs > r.tuples);
    CHECK_THROWS_AS(sim_transitive_check({1, 3}), InvalidParameter);
}
