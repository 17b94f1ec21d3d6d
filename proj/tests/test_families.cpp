#include <doctest.h>

#include "looplab/errors.hpp"
#include "looplab/families.hpp"

using namespace looplab;

namespace {

std::size_t falling(std::size_t s, std::size_t k)
{
    std::size_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r *= s >= i ? s - i : 0;
    return r;
}

}  // namespace

TEST_CASE("dcp shape")
{
    const auto g = dcp(2, 5);
    CHECK(g.node_count() == 6);
    CHECK(g.edge_count() == 7);
    CHECK_FALSE(has_loop(g));
    CHECK(has_loop(dcp(1, 4)));
    for (std::size_t a = 1; a <= 5; ++a) {
        for (std::size_t b = 1; b <= 5; ++b) {
            const auto d = dcp(a, b);
            CHECK(d.node_count() == a + b - 1);
            CHECK(d.edge_count() == (a == 1 && b == 1 ? 1 : a + b));
        }
    }
    CHECK(dcp_a(2, 3, 0) == dcp_b(2, 3, 0));
}

TEST_CASE("family examples")
{
    const auto c203 = cclw(2, 0, 3);
    CHECK(c203.graph.node_count() == 6);
    CHECK(c203.graph.edge_count() == 12);
    CHECK(cclw(2, 1, 3).graph.node_count() == 9);

    const auto q203 = clqp(2, 0, 3);
    CHECK(q203.graph.node_count() == 6);
    CHECK(q203.graph.edge_count() == 6);
    CHECK(clqp(3, 0, 2).graph.node_count() == 0);

    const auto q231 = clqp(2, 3, 1);
    CHECK(q231.graph.node_count() == 3);
    CHECK(q231.graph.edge_count() == 6);

    for (const auto& n : c203.nodes) CHECK(is_cclw_node(n, 0, 3));
    CHECK_THROWS_AS(cclw(0, 0, 3), InvalidParameter);
}

TEST_CASE("degenerate cycle sizes are generated literally")
{
    // c = 1: the only step is 0 -> 0. c = 2: +1 and -1 coincide.
    CHECK(cclw_nodes(3, 0, 1).size() == 1);
    CHECK(cclw_nodes(3, 0, 2).size() == 2);
    CHECK(cclw(1, 0, 1).graph.edge_count() == 1);
}

TEST_CASE("node counts at l = 0")
{
    for (int k = 1; k <= 5; ++k) {
        for (int s = 1; s <= 5; ++s) {
            CHECK(clqp_nodes(k, 0, s).size() == falling(static_cast<std::size_t>(s), static_cast<std::size_t>(k)));
        }
        for (int c = 3; c <= 5; ++c) CHECK(cclw_nodes(k, 0, c).size() == static_cast<std::size_t>(c) << (k - 1));
    }
}

TEST_CASE("generated nodes match the membership predicates")
{
    for (int k = 1; k <= 3; ++k) {
        for (int l = 0; l <= 2; ++l) {
            for (int s = 1; s <= 3; ++s) {
                for (const auto& n : clqp_nodes(k, l, s)) CHECK(is_clqp_node(n, l, s));
                for (const auto& n : cclw_nodes(k, l, s + 2)) CHECK(is_cclw_node(n, l, s + 2));
            }
        }
    }
    FamilyNode repeat{{0, 0, 0}, {1, 1}};
    CHECK_FALSE(is_cclw_node(repeat, 2, 3));
    FamilyNode unchained{{0, 1, 0}, {kNone, kNone}};
    CHECK_FALSE(is_clqp_node(unchained, 0, 3));
    CHECK(is_cclw_node(unchained, 0, 3));
}

TEST_CASE("encode and decode round trip")
{
    const FamilyNode n{{0, 1, 1}, {kNone, 1}};
    CHECK(encode(n) == "0|.|1|L1|1");
    CHECK(decode_family_node("0|.|1|L1|1") == n);
    CHECK(decode_family_node("2") == FamilyNode{{2}, {}});
    for (const auto& m : cclw_nodes(3, 2, 3)) CHECK(decode_family_node(encode(m)) == m);
    CHECK_THROWS_AS(decode_family_node("0|x|1"), ParseError);
    CHECK_THROWS_AS(decode_family_node("0|.|"), ParseError);
    CHECK_THROWS_AS(decode_family_node(""), ParseError);
}

TEST_CASE("family edges join prefix to suffix")
{
    const auto g = cclw(3, 1, 3);
    const auto longer = cclw_nodes(4, 1, 3);
    CHECK(g.graph.edge_count() <= longer.size());
    for (const auto& n : longer) {
        const auto a = g.find(prefix(n)), b = g.find(suffix(n));
        REQUIRE(a);
        REQUIRE(b);
        CHECK(g.graph.has_edge(*a, *b));
    }
}

TEST_CASE("raise isomorphism")
{
    for (auto [k, s] : {std::pair{1, 3}, {2, 3}, {1, 1}, {2, 2}, {3, 3}}) {
        const auto r = clqp_raise_iso(k, s);
        CHECK(r.from.graph.node_count() == r.to.graph.node_count());
        CHECK(r.from.graph.edge_count() == r.to.graph.edge_count());
        CHECK(verify_hom(r.from.graph, r.to.graph, r.map));
        CHECK(is_isomorphic(r.from.graph, r.to.graph));
    }
    CHECK(is_isomorphic(clqp_raise_iso(1, 3).to.graph, make_basic(BasicKind::clique, 3)));
}

TEST_CASE("reduce witnesses verify independently")
{
    for (auto [k, l, s] : {std::tuple{2, 1, 2}, {2, 1, 1}, {3, 1, 2}}) {
        const auto w = clqp_reduce_witness(k, l, s);
        CHECK(w.embeddings.size() == 3);
        CHECK(w.pairs.size() == 6);
        for (const auto& e : w.embeddings) CHECK(verify_hom(w.base.graph, w.target.graph, e));
        for (const auto& p : w.pairs) CHECK(verify_hom(p.edge_template, w.target.graph, p.map));
    }
    const auto w212 = clqp_reduce_witness(2, 1, 2);
    CHECK(w212.big.graph.node_count() == 4);
    CHECK(w212.target.graph.node_count() == 30);

    for (auto [k, l, c] : {std::tuple{2, 1, 3}, {2, 1, 5}, {3, 1, 3}}) {
        const auto w = cclw_reduce_witness(k, l, c);
        CHECK(w.embeddings.size() == static_cast<std::size_t>(c));
        CHECK(w.pairs.size() == 2 * static_cast<std::size_t>(c));
        for (const auto& e : w.embeddings) CHECK(verify_hom(w.base.graph, w.target.graph, e));
        for (const auto& p : w.pairs) {
            CHECK(verify_hom(p.edge_template, w.target.graph, p.map));
            const int d = (p.to - p.from + c) % c;
            CHECK((d == 1 || d == c - 1));
        }
    }
    CHECK(cclw_reduce_witness(2, 1, 3).big.graph.node_count() == 9);
    CHECK_THROWS_AS(cclw_reduce_witness(2, 1, 4), InvalidParameter);
    CHECK_THROWS_AS(clqp_reduce_witness(1, 1, 2), InvalidParameter);
}

TEST_CASE("CLQP(k,l,1) sits inside CCLW(k,l,c)")
{
    for (int k = 1; k <= 4; ++k) {
        for (int l = 0; l <= 3; ++l) {
            for (int c = 3; c <= 5; c += 2) CHECK(clqp_embeds_in_cclw(k, l, c));
        }
    }
}

TEST_CASE("walk decoding")
{
    CHECK(decode_walk(0, 4, 3) == std::vector<int>{0, 2, 1, 0});
    CHECK(decode_walk(0b0111, 4, 3) == std::vector<int>{0, 1, 2, 0});
    CHECK(decode_walk((2ULL << 3) | 0b101, 4, 5) == std::vector<int>{2, 3, 2, 3});
}

TEST_CASE("local rule on sample windows")
{
    const int c = 3;
    std::vector<int> w(19, 0);
    // Centre letter 0 is always in S.
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = static_cast<int>(i % 3);
    REQUIRE(w[9] == 0);
    CHECK(cclw_dcp_image(w, c) == dcp_a(2, 3, 0));

    // No zeros: the 2s are in S, a centre 1 sits between two of them.
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = i % 2 == 0 ? 2 : 1;
    CHECK(cclw_dcp_image(w, c) == dcp_a(2, 3, 1));
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = i % 2 == 0 ? 1 : 2;
    CHECK(cclw_dcp_image(w, c) == dcp_a(2, 3, 0));

    CHECK_THROWS_AS(cclw_dcp_image(std::vector<int>(7, 0), c), InvalidParameter);
}

TEST_CASE("streaming check reports violations of a broken rule")
{
    // Sending every window to A_0 breaks every edge since dcp(2,3) is loopless.
    const WindowMap constant = [](std::span<const int>, int) { return NodeId{0}; };
    for (auto exec : {Exec::serial, Exec::parallel}) {
        const auto rep = verify_cclw_to_dcp(3, exec, constant);
        CHECK_FALSE(rep.ok());
        CHECK(rep.violations == rep.walks_checked);
        CHECK(rep.first_violation == std::uint64_t{0});
        CHECK(rep.counterexample == decode_walk(0, 20, 3));
    }
    CHECK_THROWS_AS(verify_cclw_to_dcp(4), InvalidParameter);
}
