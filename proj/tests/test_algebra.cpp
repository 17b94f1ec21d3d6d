#include <doctest.h>

#include <algorithm>

#include "looplab/algebra.hpp"
#include "looplab/errors.hpp"
#include "looplab/loopcond.hpp"
#include "oracles.hpp"

using namespace looplab;

namespace {

std::vector<std::vector<Element>> elements_of(const SubpowerTrace& t)
{
    std::vector<std::vector<Element>> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto e = t.element(i);
        out.emplace_back(e.begin(), e.end());
    }
    return out;
}

bool same_trace(const SubpowerTrace& a, const SubpowerTrace& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto x = a.element(i), y = b.element(i);
        if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) return false;
        if (a.provenance(i).op != b.provenance(i).op) return false;
        const auto p = a.arguments(i), q = b.arguments(i);
        if (!std::equal(p.begin(), p.end(), q.begin(), q.end())) return false;
    }
    return true;
}

// A small algebra with a nullary constant, a unary and a binary operation.
FiniteAlgebra mixed3()
{
    FiniteAlgebra a;
    a.size = 3;
    a.ops.push_back(make_operation("zero", 0, 3, [](auto) { return Element{0}; }));
    a.ops.push_back(make_operation("succ", 1, 3, [](auto x) { return Element((x[0] + 1) % 3); }));
    a.ops.push_back(make_operation("mul", 2, 3, [](auto x) { return Element((x[0] * x[1]) % 3); }));
    return a;
}

std::vector<std::string> gen_names(std::size_t g)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < g; ++i) out.push_back("x" + std::to_string(i + 1));
    return out;
}

}  // namespace

TEST_CASE("validation")
{
    CHECK(validate_algebra(builtin_algebra("majority2")).ok());
    FiniteAlgebra bad;
    bad.size = 2;
    bad.ops.push_back({"f", 2, {0, 1, 1}});
    CHECK_FALSE(validate_algebra(bad).ok());
    CHECK_THROWS_AS(require_valid(bad), InvalidParameter);
    bad.ops[0].table = {0, 1, 1, 2};
    CHECK_FALSE(validate_algebra(bad).ok());
    bad.ops[0].table = {0, 1, 1, 1};
    bad.ops.push_back({"f", 1, {0, 1}});
    CHECK_FALSE(validate_algebra(bad).ok());
    FiniteAlgebra empty;
    CHECK_FALSE(validate_algebra(empty).ok());

    const auto rep = validate_algebra(builtin_algebra("affine(3)"));
    REQUIRE(rep.idempotent.size() == 1);
    CHECK(rep.idempotent[0]);
    CHECK_FALSE(validate_algebra(mixed3()).idempotent[1]);
}

TEST_CASE("builtin algebras")
{
    const auto maj = builtin_algebra("majority2");
    const auto& m = *maj.find("maj");
    for (Element x = 0; x < 2; ++x) {
        for (Element y = 0; y < 2; ++y) {
            const Element a1[] = {x, x, y}, a2[] = {x, y, x}, a3[] = {y, x, x};
            CHECK(m.apply(a1, 2) == x);
            CHECK(m.apply(a2, 2) == x);
            CHECK(m.apply(a3, 2) == x);
        }
    }
    const auto aff = builtin_algebra("affine(5)");
    const Element args[] = {3, 4, 1};
    CHECK(aff.find("m")->apply(args, 5) == 0);
    CHECK_THROWS_AS(builtin_algebra("affine(4)"), InvalidParameter);
    CHECK_THROWS(builtin_algebra("nope"));
    for (const auto& n : builtin_algebra_names()) CHECK(validate_algebra(builtin_algebra(n)).ok());
}

TEST_CASE("term evaluation")
{
    const auto a = builtin_algebra("affine(3)");
    const auto x = Term::var("x"), y = Term::var("y"), z = Term::var("z");
    const auto t = Term::apply("m", {x, y, Term::apply("m", {z, z, y})});
    CHECK(to_string(t) == "m(x,y,m(z,z,y))");
    CHECK(eval_term(a, t, {{"x", 2}, {"y", 1}, {"z", 0}}) == 2);
    CHECK(variables(t) == std::vector<std::string>{"x", "y", "z"});
    CHECK(tree_size(t) == 7);
    CHECK(tree_size(t, 3) == 3);
    CHECK_THROWS_AS(eval_term(a, t, {{"x", 2}}), InvalidParameter);
    CHECK_THROWS_AS(eval_term(a, Term::apply("m", {x}), {{"x", 0}}), InvalidParameter);
    CHECK_THROWS_AS(eval_term(a, Term::apply("q", {x}), {{"x", 0}}), InvalidParameter);

    const auto s = substitute(t, {{"z", x}, {"y", x}});
    CHECK(to_string(s) == "m(x,x,m(x,x,x))");
    CHECK(eval_term(a, s, {{"x", 1}}) == 1);

    const auto cols = eval_term_columns(a, t, {{"x", {0, 1, 2}}, {"y", {1, 1, 1}}, {"z", {2, 0, 0}}}, 3);
    for (Element i = 0; i < 3; ++i) {
        CHECK(cols[i] == eval_term(a, t, {{"x", i}, {"y", 1}, {"z", Element(i == 0 ? 2 : 0)}}));
    }
    CHECK(Term::apply("m", {x, y, z}) == Term::apply("m", {x, y, z}));
    CHECK_FALSE(Term::apply("m", {x, y, z}) == Term::apply("m", {x, z, y}));
}

TEST_CASE("shared subterms keep deep terms cheap")
{
    const auto a = builtin_algebra("affine(2)");
    auto t = Term::var("x");
    for (int i = 0; i < 80; ++i) t = Term::apply("m", {t, t, t});
    CHECK(tree_size(t, 1'000'000) == 1'000'000);
    CHECK(eval_term(a, t, {{"x", 1}}) == 1);
}

TEST_CASE("free algebra sizes")
{
    CHECK(free_algebra(builtin_algebra("semilattice2"), 2).trace.size() == 3);
    CHECK(free_algebra(builtin_algebra("affine(2)"), 2).trace.size() == 2);
    CHECK(free_algebra(builtin_algebra("projections2"), 3).trace.size() == 3);
    // Idempotent reducts of affine spaces over Z_p: p^(g-1) elements.
    CHECK(free_algebra(builtin_algebra("affine(3)"), 3).trace.size() == 9);
    CHECK(free_algebra(builtin_algebra("affine(5)"), 2).trace.size() == 5);
    // Median algebra on 3 generators: x, y, z and the median.
    CHECK(free_algebra(builtin_algebra("majority2"), 3).trace.size() == 4);
    CHECK(free_algebra(builtin_algebra("semilattice2"), 3).trace.size() == 7);
    CHECK(projection_generators(3, 2).size() == 2);
    CHECK(projection_generators(3, 2)[0] == std::vector<Element>{0, 0, 0, 1, 1, 1, 2, 2, 2});
}

TEST_CASE("closure matches the naive fixpoint")
{
    std::vector<FiniteAlgebra> algebras;
    for (const auto& n : builtin_algebra_names()) algebras.push_back(builtin_algebra(n));
    algebras.push_back(mixed3());
    std::mt19937 rng(17);
    for (const auto& a : algebras) {
        for (std::size_t width = 1; width <= 3; ++width) {
            for (std::size_t ng = 1; ng <= 2; ++ng) {
                std::vector<std::vector<Element>> gens(ng, std::vector<Element>(width));
                for (auto& g : gens) {
                    for (auto& e : g) e = static_cast<Element>(rng() % a.size);
                }
                const auto fast = subpower_closure(a, width, gens);
                REQUIRE(fast.status == ClosureStatus::closed);
                auto got = elements_of(fast.trace);
                std::sort(got.begin(), got.end());
                got.erase(std::unique(got.begin(), got.end()), got.end());
                CHECK(got.size() == fast.trace.size());
                const auto slow = oracle::naive_closure(a, gens);
                CHECK(std::vector<std::vector<Element>>(slow.begin(), slow.end()) == got);
            }
        }
    }
}

TEST_CASE("every element replays from its extracted term")
{
    for (const auto& [name, g] : {std::pair<std::string, std::size_t>{"majority2", 3},
                                  {"affine(3)", 3},
                                  {"semilattice2", 3},
                                  {"nu4", 3}}) {
        const auto a = builtin_algebra(name);
        const auto gens = projection_generators(a.size, g);
        const auto r = free_algebra(a, g);
        const auto names = gen_names(g);
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
            const auto t = extract_term(r.trace, i, names);
            CHECK(replay_matches(a, r.trace, i, t, names, gens));
        }
    }
    const auto m = mixed3();
    const std::vector<std::vector<Element>> gens{{1, 2}};
    const auto r = subpower_closure(m, 2, gens);
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        CHECK(replay_matches(m, r.trace, i, extract_term(r.trace, i, {"x"}), {"x"}, gens));
    }
}

TEST_CASE("serial and parallel closures agree")
{
    for (const auto& [name, g] : {std::pair<std::string, std::size_t>{"affine(3)", 5},
                                  {"majority2", 4},
                                  {"affine(5)", 3},
                                  {"semilattice2", 4}}) {
        const auto a = builtin_algebra(name);
        const auto s = free_algebra(a, g, {}, Exec::serial);
        const auto p = free_algebra(a, g, {}, Exec::parallel);
        CHECK(s.status == p.status);
        CHECK(s.applications == p.applications);
        CHECK(same_trace(s.trace, p.trace));
        CHECK(same_trace(p.trace, free_algebra(a, g, {}, Exec::parallel).trace));
    }
}

TEST_CASE("stop predicate and caps")
{
    const auto a = builtin_algebra("majority2");
    const auto gens = projection_generators(2, 3);
    // Stop at the first element that differs from every generator.
    const auto r = subpower_closure(a, 8, gens, [&](std::span<const Element> t) {
        return std::none_of(gens.begin(), gens.end(),
                            [&](const auto& g) { return std::equal(g.begin(), g.end(), t.begin(), t.end()); });
    });
    CHECK(r.status == ClosureStatus::witness_found);
    REQUIRE(r.witness);
    CHECK(*r.witness == 3);

    const auto capped = free_algebra(builtin_algebra("affine(3)"), 5, {10, 100'000'000});
    CHECK(capped.status == ClosureStatus::cap_exceeded);
    const auto capped_apps = free_algebra(builtin_algebra("affine(3)"), 5, {100'000, 50});
    CHECK(capped_apps.status == ClosureStatus::cap_exceeded);
    CHECK(to_string(ClosureStatus::cap_exceeded) == "cap_exceeded");
}

TEST_CASE("compatibility with digraphs")
{
    const auto order = Digraph::with_indices(2, {{0, 0}, {0, 1}, {1, 1}});
    const auto k2 = make_basic(BasicKind::clique, 2);
    CHECK(is_compatible(builtin_algebra("majority2"), order));
    CHECK(is_compatible(builtin_algebra("semilattice2"), order));
    CHECK_FALSE(is_compatible(builtin_algebra("affine(2)"), order));
    CHECK(is_compatible(builtin_algebra("majority2"), k2));
    CHECK(is_compatible(builtin_algebra("affine(2)"), k2));
    CHECK_FALSE(is_compatible(builtin_algebra("semilattice2"), k2));
    CHECK(is_compatible(builtin_algebra("projections2"), k2));
    CHECK(is_compatible(builtin_algebra("affine(3)"), make_basic(BasicKind::dir_cycle, 3)));
}
