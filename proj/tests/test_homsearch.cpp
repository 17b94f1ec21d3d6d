#include <doctest.h>

#include "looplab/errors.hpp"
#include "looplab/families.hpp"
#include "looplab/homsearch.hpp"
#include "oracles.hpp"

using namespace looplab;

namespace {

Digraph D(std::size_t n) { return make_basic(BasicKind::dir_cycle, n); }
Digraph K(std::size_t n) { return make_basic(BasicKind::clique, n); }
Digraph C(std::size_t n) { return make_basic(BasicKind::sym_cycle, n); }

}  // namespace

TEST_CASE("find_hom examples")
{
    const auto d6 = D(6), d3 = D(3), k3 = K(3), c5 = C(5);
    auto r = find_hom({d6, d3});
    REQUIRE(r);
    CHECK(verify_hom(d6, d3, r.map));
    CHECK_FALSE(find_hom({d3, d6}));
    CHECK_FALSE(find_hom({k3, c5}));

    auto pinned = find_hom({k3, k3, {NodeId{1}, std::nullopt, std::nullopt}});
    REQUIRE(pinned);
    CHECK(pinned.map[0] == 1);
    CHECK(verify_hom(k3, k3, pinned.map));

    // A pin onto a node lacking the needed edges fails at once.
    const auto path = make_basic(BasicKind::dir_path, 2);
    std::vector<std::optional<NodeId>> pins(path.node_count());
    pins[0] = static_cast<NodeId>(path.node_count() - 1);
    CHECK_FALSE(find_hom({path, path, pins}));
}

TEST_CASE("verify_hom examples")
{
    const auto d4 = D(4), d3 = D(3), d1 = D(1);
    CHECK(verify_hom(d4, d4, {0, 1, 2, 3}));
    CHECK(verify_hom(d3, d1, {0, 0, 0}));
    CHECK(verify_hom(d3, d3, {1, 2, 0}));
    CHECK_FALSE(verify_hom(d3, d3, {0, 0, 0}));
    CHECK_FALSE(verify_hom(d3, d3, {0, 1}));
}

TEST_CASE("hom_to_dir_cycle")
{
    CHECK(hom_to_dir_cycle(D(6), 3));
    CHECK_FALSE(hom_to_dir_cycle(D(6), 4));
    CHECK(hom_to_dir_cycle(C(5), 1));
    for (const auto& g : oracle::random_corpus(120, 8, 12, 5)) {
        const auto al = algebraic_length(g);
        for (std::size_t n = 1; n <= 12; ++n) {
            const auto m = hom_to_dir_cycle(g, n);
            CHECK(m.has_value() == (al.is_infinite() || al.value() % n == 0));
            if (m) CHECK(verify_hom(g, D(n), *m));
            if (n <= 4 && g.node_count() <= 6) CHECK(m.has_value() == (find_hom({g, D(n)}).status == HomStatus::found));
        }
    }
}

TEST_CASE("enumerate_homs examples")
{
    CHECK(enumerate_homs({D(2), K(3)}, 100).size() == 6);
    const auto rot = enumerate_homs({D(3), D(3)}, 10);
    CHECK(rot.size() == 3);
    CHECK(rot.front() == NodeMap{0, 1, 2});
    CHECK(enumerate_homs({K(3), D(3)}, 10).empty());
    CHECK(enumerate_homs({D(2), K(3)}, 4).size() == 4);
}

TEST_CASE("find_hom and enumerate agree with brute force on small pairs")
{
    const auto sources = oracle::random_corpus(70, 4, 7, 101);
    const auto targets = oracle::random_corpus(25, 4, 8, 202);
    for (const auto& s : sources) {
        for (const auto& t : targets) {
            const auto brute = oracle::all_homs(s, t);
            const auto r = find_hom({s, t});
            REQUIRE(r.status != HomStatus::budget_exceeded);
            CHECK((r.status == HomStatus::found) == !brute.empty());
            if (r) CHECK(verify_hom(s, t, r.map));
            CHECK(enumerate_homs({s, t}, 1000) == brute);
        }
    }
}

TEST_CASE("composition of found homomorphisms")
{
    const auto corpus = oracle::random_corpus(40, 4, 7, 303);
    for (std::size_t i = 0; i + 2 < corpus.size(); ++i) {
        const auto f = find_hom({corpus[i], corpus[i + 1]});
        const auto g = find_hom({corpus[i + 1], corpus[i + 2]});
        if (f && g) CHECK(verify_hom(corpus[i], corpus[i + 2], compose(f.map, g.map)));
    }
}

TEST_CASE("budget is reported, not swallowed")
{
    // K_7 -> K_6 has no homomorphism and needs real search.
    const auto r = find_hom({K(7), K(6)}, {1});
    CHECK(r.status == HomStatus::budget_exceeded);
    CHECK_THROWS_AS(enumerate_homs({K(7), K(6)}, 1, {1}), BudgetExceeded);
}

TEST_CASE("edge-surjective closed walk lengths")
{
    std::set<std::size_t> expect{5};
    for (std::size_t n = 7; n <= 20; ++n) expect.insert(n);
    CHECK(edge_surjective_cycle_lengths(dcp(2, 3), 20) == expect);
    CHECK(edge_surjective_cycle_lengths(D(4), 12) == std::set<std::size_t>{4, 8, 12});
    CHECK(edge_surjective_cycle_lengths(D(1), 5) == std::set<std::size_t>{1, 2, 3, 4, 5});
    CHECK_THROWS_AS(edge_surjective_cycle_lengths(K(6), 10), InvalidParameter);

    CHECK(edge_surjective_cycle_lengths(dcp(2, 3), 14) == oracle::covering_walk_lengths(dcp(2, 3), 14));
    CHECK(edge_surjective_cycle_lengths(dcp(3, 3), 12) == oracle::covering_walk_lengths(dcp(3, 3), 12));
    for (std::size_t a = 1; a <= 4; ++a) {
        for (std::size_t b = 1; b <= 4; ++b) {
            const auto g = dcp(a, b);
            const auto al = algebraic_length(g).value();
            for (auto n : edge_surjective_cycle_lengths(g, 24)) CHECK(n % al == 0);
        }
    }
}

TEST_CASE("pp-construction with a path template is the relational power")
{
    // Vertex template: one node; edge template: path 0 -> 1 -> 2 with ends pinned.
    const Digraph point = Digraph::with_indices(1, {});
    const Digraph path = Digraph::with_indices(3, {{0, 1}, {1, 2}});
    const PpTemplate t{point, path, {0}, {2}};
    for (const auto& g : {dcp(2, 3), D(5), C(4), dcp(3, 4)}) {
        const auto pp = pp_construct(t, g);
        CHECK(pp.edges() == relational_power(g, 2).edges());
    }
}

TEST_CASE("relational square of DCP(2,b) for odd b")
{
    for (std::size_t b = 3; b <= 7; b += 2) {
        const auto sq = relational_power(dcp(2, b), 2);
        CHECK(sq.has_edge(0, 0));
        CHECK(algebraic_length(sq) == AlgLength::finite(1));
    }
}
