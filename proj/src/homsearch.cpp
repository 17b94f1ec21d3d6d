#include "looplab/homsearch.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "looplab/errors.hpp"

namespace looplab {

namespace {

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t n, bool full = false)
        : words_((n + 63) / 64, full ? ~std::uint64_t{0} : 0), n_(n)
    {
        if (full && n % 64) words_.back() = (std::uint64_t{1} << (n % 64)) - 1;
    }

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
    bool test(std::size_t i) const { return words_[i / 64] >> (i % 64) & 1; }

    std::size_t count() const
    {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    bool any() const
    {
        return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
    }

    bool intersects(const Bitset& o) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & o.words_[i]) return true;
        }
        return false;
    }

    /// this &= o; returns true when something was removed.
    bool restrict_to(const Bitset& o)
    {
        bool changed = false;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            const auto w = words_[i] & o.words_[i];
            changed |= w != words_[i];
            words_[i] = w;
        }
        return changed;
    }

    void unite(const Bitset& o)
    {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    }

    template <typename F>
    void for_each(F&& f) const
    {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            auto w = words_[i];
            while (w) {
                f(i * 64 + static_cast<std::size_t>(__builtin_ctzll(w)));
                w &= w - 1;
            }
        }
    }

    std::size_t size() const { return n_; }

private:
    std::vector<std::uint64_t> words_;
    std::size_t n_ = 0;
};

using Domains = std::vector<Bitset>;

class Solver {
public:
    Solver(const HomProblem& p, const HomOptions& opts, bool fail_first)
        : src_(p.source), tgt_(p.target), opts_(opts), fail_first_(fail_first)
    {
        const auto tn = tgt_.node_count();
        out_.assign(tn, Bitset(tn));
        in_.assign(tn, Bitset(tn));
        loops_ = Bitset(tn);
        for (const auto& [a, b] : tgt_.edges()) {
            out_[a].set(b);
            in_[b].set(a);
            if (a == b) loops_.set(a);
        }
        has_out_ = Bitset(tn);
        has_in_ = Bitset(tn);
        for (NodeId a = 0; a < tn; ++a) {
            if (out_[a].any()) has_out_.set(a);
            if (in_[a].any()) has_in_.set(a);
        }
        initial_.assign(src_.node_count(), Bitset(tn, true));
        for (NodeId v = 0; v < p.pins.size() && v < src_.node_count(); ++v) {
            if (p.pins[v]) {
                if (*p.pins[v] >= tn) throw InvalidParameter("pin value out of range");
                Bitset one(tn);
                one.set(*p.pins[v]);
                initial_[v] = one;
            }
        }
        if (p.pins.size() > src_.node_count()) throw InvalidParameter("pin key out of range");
        for (NodeId v = 0; v < src_.node_count(); ++v) {
            if (!src_.out(v).empty()) initial_[v].restrict_to(has_out_);
            if (!src_.in(v).empty()) initial_[v].restrict_to(has_in_);
            if (src_.has_edge(v, v)) initial_[v].restrict_to(loops_);
        }
    }

    template <typename OnSolution>
    HomStatus run(OnSolution&& on_solution)
    {
        Domains d = initial_;
        if (src_.node_count() == 0) {
            on_solution(NodeMap{});
            return HomStatus::found;
        }
        for (const auto& dom : d) {
            if (!dom.any()) return HomStatus::none;
        }
        if (!propagate(d, all_nodes())) return HomStatus::none;
        try {
            return search(d, on_solution) ? HomStatus::found : found_any_ ? HomStatus::found : HomStatus::none;
        } catch (const BudgetExceeded&) {
            return HomStatus::budget_exceeded;
        }
    }

    std::uint64_t backtracks() const { return backtracks_; }

private:
    std::vector<NodeId> all_nodes() const
    {
        std::vector<NodeId> v(src_.node_count());
        for (NodeId i = 0; i < v.size(); ++i) v[i] = i;
        return v;
    }

    // Revise all neighbours of the queued variables until a fixpoint.
    bool propagate(Domains& d, std::vector<NodeId> queue) const
    {
        std::vector<char> queued(src_.node_count(), 0);
        for (auto v : queue) queued[v] = 1;
        const auto tn = tgt_.node_count();
        while (!queue.empty()) {
            const NodeId u = queue.back();
            queue.pop_back();
            queued[u] = 0;
            // Successors of u must lie in the out-neighbourhood of D(u).
            Bitset reach(tn), back(tn);
            d[u].for_each([&](std::size_t a) {
                reach.unite(out_[a]);
                back.unite(in_[a]);
            });
            auto revise = [&](NodeId w, const Bitset& allowed) {
                if (d[w].restrict_to(allowed)) {
                    if (!d[w].any()) return false;
                    if (!queued[w]) {
                        queued[w] = 1;
                        queue.push_back(w);
                    }
                }
                return true;
            };
            for (NodeId w : src_.out(u)) {
                if (!revise(w, reach)) return false;
            }
            for (NodeId w : src_.in(u)) {
                if (!revise(w, back)) return false;
            }
        }
        return true;
    }

    template <typename OnSolution>
    bool search(Domains& d, OnSolution& on_solution)
    {
        // Pick the branching variable.
        NodeId var = static_cast<NodeId>(-1);
        std::size_t best = static_cast<std::size_t>(-1);
        for (NodeId v = 0; v < d.size(); ++v) {
            const auto c = d[v].count();
            if (c <= 1) continue;
            if (!fail_first_) {
                var = v;
                break;
            }
            if (c < best) {
                best = c;
                var = v;
            }
        }
        if (var == static_cast<NodeId>(-1)) {
            NodeMap m(d.size());
            for (NodeId v = 0; v < d.size(); ++v) {
                d[v].for_each([&](std::size_t a) { m[v] = static_cast<NodeId>(a); });
            }
            found_any_ = true;
            return on_solution(std::move(m));
        }
        std::vector<std::size_t> values;
        d[var].for_each([&](std::size_t a) { values.push_back(a); });
        for (auto a : values) {
            Domains next = d;
            Bitset one(tgt_.node_count());
            one.set(a);
            next[var] = one;
            if (propagate(next, {var})) {
                if (search(next, on_solution)) return true;
            }
            if (++backtracks_ > opts_.max_backtracks) {
                throw BudgetExceeded("homomorphism search exceeded backtrack budget");
            }
        }
        return false;
    }

    const Digraph& src_;
    const Digraph& tgt_;
    HomOptions opts_;
    bool fail_first_;
    std::vector<Bitset> out_, in_;
    Bitset loops_, has_out_, has_in_;
    Domains initial_;
    std::uint64_t backtracks_ = 0;
    bool found_any_ = false;
};

}  // namespace

HomResult find_hom(const HomProblem& p, const HomOptions& opts)
{
    HomResult r;
    Solver s(p, opts, true);
    r.status = s.run([&](NodeMap m) {
        r.map = std::move(m);
        return true;
    });
    r.backtracks = s.backtracks();
    if (r.status != HomStatus::found) r.map.clear();
    return r;
}

bool verify_hom(const Digraph& g, const Digraph& h, const NodeMap& map)
{
    if (map.size() != g.node_count()) return false;
    for (auto v : map) {
        if (v >= h.node_count()) return false;
    }
    return std::all_of(g.edges().begin(), g.edges().end(),
                       [&](const Edge& e) { return h.has_edge(map[e.first], map[e.second]); });
}

std::vector<NodeMap> enumerate_homs(const HomProblem& p, std::size_t limit, const HomOptions& opts)
{
    std::vector<NodeMap> out;
    if (limit == 0) return out;
    Solver s(p, opts, false);
    const auto status = s.run([&](NodeMap m) {
        out.push_back(std::move(m));
        return out.size() >= limit;
    });
    if (status == HomStatus::budget_exceeded) {
        throw BudgetExceeded("homomorphism enumeration exceeded backtrack budget");
    }
    return out;
}

std::optional<NodeMap> hom_to_dir_cycle(const Digraph& g, std::size_t n)
{
    if (n == 0) throw InvalidParameter("directed cycle length must be >= 1");
    const auto pot = spanning_potentials(g);
    const auto m = static_cast<std::int64_t>(n);
    for (const auto& [u, v] : g.edges()) {
        if ((pot[u] + 1 - pot[v]) % m != 0) return std::nullopt;
    }
    NodeMap map(g.node_count());
    for (NodeId v = 0; v < map.size(); ++v) {
        map[v] = static_cast<NodeId>(((pot[v] % m) + m) % m);
    }
    return map;
}

std::set<std::size_t> edge_surjective_cycle_lengths(const Digraph& g, std::size_t max_n,
                                                    const EdgeSurjectiveOptions& opts)
{
    const auto e = g.edge_count();
    if (e > opts.max_edges || e > 30) {
        throw InvalidParameter("edge-surjective search limited to " + std::to_string(opts.max_edges) +
                               " edges, got " + std::to_string(e));
    }
    std::set<std::size_t> lengths;
    if (e == 0 || max_n == 0) return lengths;

    const auto n = g.node_count();
    const std::uint64_t masks = std::uint64_t{1} << e;
    const std::uint64_t full = masks - 1;
    // Out-edges by index so a step knows which bit it covers.
    std::vector<std::vector<std::pair<NodeId, std::uint32_t>>> out(n);
    for (std::uint32_t i = 0; i < e; ++i) {
        const auto& [u, v] = g.edges()[i];
        out[u].emplace_back(v, i);
    }
    // Rotate every closed walk so it starts with edge 0.
    const NodeId start = g.edges()[0].first;
    std::vector<char> cur(n * masks, 0), next(n * masks, 0);
    cur[g.edges()[0].second * masks + 1] = 1;
    for (std::size_t len = 1; len <= max_n; ++len) {
        if (cur[start * masks + full]) lengths.insert(len);
        if (len == max_n) break;
        std::fill(next.begin(), next.end(), 0);
        bool any = false;
        for (NodeId v = 0; v < n; ++v) {
            const auto base = v * masks;
            for (std::uint64_t m = 0; m < masks; ++m) {
                if (!cur[base + m]) continue;
                for (const auto& [w, bit] : out[v]) {
                    next[w * masks + (m | std::uint64_t{1} << bit)] = 1;
                    any = true;
                }
            }
        }
        if (!any) break;
        cur.swap(next);
    }
    return lengths;
}

Digraph pp_construct(const PpTemplate& t, const Digraph& g, std::size_t node_limit,
                     const HomOptions& opts)
{
    const auto& vt = t.vertex_template;
    const auto& et = t.edge_template;
    if (!verify_hom(vt, et, t.phi0) || !verify_hom(vt, et, t.phi1)) {
        throw InvalidParameter("template maps are not homomorphisms");
    }
    const auto nodes = enumerate_homs({vt, g}, node_limit + 1, opts);
    if (nodes.size() > node_limit) {
        throw BudgetExceeded("pp-construction exceeds node limit");
    }
    std::map<NodeMap, NodeId> index;
    std::vector<std::string> labels;
    for (NodeId i = 0; i < nodes.size(); ++i) {
        index.emplace(nodes[i], i);
        std::string l;
        for (std::size_t j = 0; j < nodes[i].size(); ++j) {
            if (j) l += ",";
            l += g.label(nodes[i][j]);
        }
        labels.push_back("(" + l + ")");
    }
    // Every homomorphism of the edge template yields one edge.
    std::vector<Edge> edges;
    const auto ehoms = enumerate_homs({et, g}, static_cast<std::size_t>(-1), opts);
    for (const auto& e : ehoms) {
        const auto a = index.at(compose(t.phi0, e));
        const auto b = index.at(compose(t.phi1, e));
        edges.emplace_back(a, b);
    }
    return Digraph(std::move(labels), std::move(edges));
}

NodeMap compose(const NodeMap& first, const NodeMap& second)
{
    NodeMap out(first.size());
    for (std::size_t i = 0; i < first.size(); ++i) out[i] = second.at(first[i]);
    return out;
}

}  // namespace looplab
