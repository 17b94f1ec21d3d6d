#include "looplab/digraph.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "looplab/errors.hpp"

namespace looplab {

Digraph::Digraph(std::vector<std::string> labels, std::vector<Edge> edges)
    : labels_(std::move(labels)), edges_(std::move(edges))
{
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) {
            throw InvalidParameter("duplicate node label '" + l + "'");
        }
    }
    const auto n = labels_.size();
    for (const auto& [u, v] : edges_) {
        if (u >= n || v >= n) {
            throw InvalidParameter("edge endpoint out of range");
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    out_.resize(n);
    in_.resize(n);
    for (const auto& [u, v] : edges_) {
        out_[u].push_back(v);
        in_[v].push_back(u);
    }
    for (auto& l : in_) {
        std::sort(l.begin(), l.end());
    }
}

Digraph Digraph::with_indices(std::size_t n, std::vector<Edge> edges)
{
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = std::to_string(i);
    }
    return Digraph(std::move(labels), std::move(edges));
}

bool Digraph::has_edge(NodeId u, NodeId v) const
{
    const auto& o = out_[u];
    return std::binary_search(o.begin(), o.end(), v);
}

std::optional<NodeId> Digraph::find(const std::string& label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        return std::nullopt;
    }
    return static_cast<NodeId>(it - labels_.begin());
}

BasicKind parse_basic_kind(const std::string& name)
{
    if (name == "clique" || name == "K") return BasicKind::clique;
    if (name == "sym_cycle" || name == "C") return BasicKind::sym_cycle;
    if (name == "dir_cycle" || name == "D") return BasicKind::dir_cycle;
    if (name == "dir_path" || name == "Z") return BasicKind::dir_path;
    throw InvalidParameter("unknown basic digraph kind '" + name + "'");
}

std::string to_string(BasicKind kind)
{
    switch (kind) {
    case BasicKind::clique: return "clique";
    case BasicKind::sym_cycle: return "sym_cycle";
    case BasicKind::dir_cycle: return "dir_cycle";
    case BasicKind::dir_path: return "dir_path";
    }
    return "?";
}

Digraph make_basic(BasicKind kind, std::size_t n)
{
    if (n == 0) {
        throw InvalidParameter("basic digraph needs n >= 1");
    }
    std::vector<Edge> edges;
    const auto m = static_cast<NodeId>(n);
    for (NodeId x = 0; x < m; ++x) {
        switch (kind) {
        case BasicKind::clique:
            for (NodeId y = 0; y < m; ++y) {
                if (x != y) edges.emplace_back(x, y);
            }
            break;
        case BasicKind::sym_cycle:
            edges.emplace_back(x, (x + 1) % m);
            edges.emplace_back(x, (x + m - 1) % m);
            break;
        case BasicKind::dir_cycle:
            edges.emplace_back(x, (x + 1) % m);
            break;
        case BasicKind::dir_path:
            if (x + 1 < m) edges.emplace_back(x, x + 1);
            break;
        }
    }
    return Digraph::with_indices(n, std::move(edges));
}

bool has_loop(const Digraph& g)
{
    return std::any_of(g.edges().begin(), g.edges().end(),
                       [](const Edge& e) { return e.first == e.second; });
}

std::vector<StrongComponent> strong_components(const Digraph& g)
{
    // Iterative Tarjan. Components pop out in reverse topological order.
    const auto n = g.node_count();
    constexpr auto unvisited = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<NodeId> stack;
    std::vector<StrongComponent> comps;
    std::uint32_t counter = 0;

    struct Frame {
        NodeId v;
        std::size_t next;
    };
    std::vector<Frame> call;

    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& f = call.back();
            const auto& succ = g.out(f.v);
            if (f.next < succ.size()) {
                const NodeId w = succ[f.next++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const NodeId v = f.v;
            call.pop_back();
            if (!call.empty()) {
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
            if (low[v] == index[v]) {
                StrongComponent c;
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    c.nodes.push_back(w);
                } while (w != v);
                std::sort(c.nodes.begin(), c.nodes.end());
                c.nontrivial = c.nodes.size() >= 2 || g.has_edge(v, v);
                comps.push_back(std::move(c));
            }
        }
    }
    std::reverse(comps.begin(), comps.end());
    return comps;
}

bool is_strongly_connected(const Digraph& g)
{
    return strong_components(g).size() == 1;
}

namespace {

std::vector<std::vector<NodeId>> undirected_adjacency(const Digraph& g)
{
    std::vector<std::vector<NodeId>> adj(g.node_count());
    for (const auto& [u, v] : g.edges()) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

}  // namespace

std::vector<std::vector<NodeId>> weak_components(const Digraph& g)
{
    const auto adj = undirected_adjacency(g);
    std::vector<char> seen(g.node_count(), 0);
    std::vector<std::vector<NodeId>> comps;
    for (NodeId root = 0; root < g.node_count(); ++root) {
        if (seen[root]) continue;
        std::vector<NodeId> comp{root};
        seen[root] = 1;
        for (std::size_t i = 0; i < comp.size(); ++i) {
            for (NodeId w : adj[comp[i]]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    comp.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b)
{
    return std::gcd(a, b);
}

std::string AlgLength::to_string() const
{
    return is_infinite() ? std::string("inf") : std::to_string(value_);
}

std::vector<std::int64_t> spanning_potentials(const Digraph& g)
{
    const auto n = g.node_count();
    std::vector<std::int64_t> pot(n, 0);
    std::vector<char> seen(n, 0);
    std::vector<NodeId> queue;
    for (NodeId root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        queue.assign(1, root);
        for (std::size_t i = 0; i < queue.size(); ++i) {
            const NodeId v = queue[i];
            for (NodeId w : g.out(v)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    pot[w] = pot[v] + 1;
                    queue.push_back(w);
                }
            }
            for (NodeId w : g.in(v)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    pot[w] = pot[v] - 1;
                    queue.push_back(w);
                }
            }
        }
    }
    return pot;
}

AlgLength algebraic_length(const Digraph& g)
{
    // Residuals of edges in different weak components never mix, so one gcd
    // over all edges equals the gcd of per-component gcds.
    const auto pot = spanning_potentials(g);
    std::uint64_t acc = 0;
    for (const auto& [u, v] : g.edges()) {
        const std::int64_t r = pot[u] + 1 - pot[v];
        acc = std::gcd(acc, static_cast<std::uint64_t>(r < 0 ? -r : r));
    }
    return acc == 0 ? AlgLength::infinity() : AlgLength::finite(acc);
}

namespace {

// Boolean adjacency matrix product over rows of 64-bit words.
using BitRows = std::vector<std::vector<std::uint64_t>>;

BitRows to_rows(const Digraph& g)
{
    const auto n = g.node_count();
    const auto words = (n + 63) / 64;
    BitRows rows(n, std::vector<std::uint64_t>(words, 0));
    for (const auto& [u, v] : g.edges()) {
        rows[u][v / 64] |= std::uint64_t{1} << (v % 64);
    }
    return rows;
}

BitRows multiply(const BitRows& a, const BitRows& b)
{
    const auto n = a.size();
    const auto words = n == 0 ? 0 : a[0].size();
    BitRows c(n, std::vector<std::uint64_t>(words, 0));
#if defined(LOOPLAB_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 16) if (n > 512)
#endif
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const auto& row = a[i];
        auto& out = c[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (row[j / 64] >> (j % 64) & 1) {
                const auto& brow = b[j];
                for (std::size_t w = 0; w < words; ++w) out[w] |= brow[w];
            }
        }
    }
    return c;
}

}  // namespace

Digraph relational_power(const Digraph& g, std::size_t k)
{
    if (k == 0) {
        throw InvalidParameter("relational power needs k >= 1");
    }
    const auto base = to_rows(g);
    BitRows acc = base;
    for (std::size_t i = 1; i < k; ++i) {
        acc = multiply(acc, base);
    }
    std::vector<Edge> edges;
    for (NodeId u = 0; u < acc.size(); ++u) {
        for (NodeId v = 0; v < acc.size(); ++v) {
            if (acc[u][v / 64] >> (v % 64) & 1) edges.emplace_back(u, v);
        }
    }
    return Digraph(g.labels(), std::move(edges));
}

Digraph disjoint_union(const Digraph& g, const Digraph& h)
{
    std::vector<std::string> labels;
    labels.reserve(g.node_count() + h.node_count());
    for (const auto& l : g.labels()) labels.push_back("0:" + l);
    for (const auto& l : h.labels()) labels.push_back("1:" + l);
    std::vector<Edge> edges = g.edges();
    const auto shift = static_cast<NodeId>(g.node_count());
    for (const auto& [u, v] : h.edges()) edges.emplace_back(u + shift, v + shift);
    return Digraph(std::move(labels), std::move(edges));
}

Digraph induced_subgraph(const Digraph& g, const std::vector<NodeId>& nodes)
{
    std::unordered_map<NodeId, NodeId> pos;
    std::vector<std::string> labels;
    for (NodeId i = 0; i < nodes.size(); ++i) {
        pos.emplace(nodes[i], i);
        labels.push_back(g.label(nodes[i]));
    }
    std::vector<Edge> edges;
    for (const auto& [u, v] : g.edges()) {
        auto a = pos.find(u);
        auto b = pos.find(v);
        if (a != pos.end() && b != pos.end()) edges.emplace_back(a->second, b->second);
    }
    return Digraph(std::move(labels), std::move(edges));
}

namespace {

struct Profile {
    std::size_t out_deg, in_deg;
    bool loop;
    friend bool operator==(const Profile&, const Profile&) = default;
};

class IsoSearch {
public:
    IsoSearch(const Digraph& g, const Digraph& h, std::uint64_t cap) : g_(g), h_(h), cap_(cap)
    {
        for (NodeId v = 0; v < g.node_count(); ++v) gp_.push_back(profile(g, v));
        for (NodeId v = 0; v < h.node_count(); ++v) hp_.push_back(profile(h, v));
        // Map the most constrained g-nodes first: BFS from high-degree seeds
        // so each new node has mapped neighbours to check against.
        std::vector<char> placed(g.node_count(), 0);
        std::vector<NodeId> by_degree(g.node_count());
        std::iota(by_degree.begin(), by_degree.end(), 0);
        std::stable_sort(by_degree.begin(), by_degree.end(), [&](NodeId a, NodeId b) {
            return gp_[a].out_deg + gp_[a].in_deg > gp_[b].out_deg + gp_[b].in_deg;
        });
        for (NodeId seed : by_degree) {
            if (placed[seed]) continue;
            placed[seed] = 1;
            std::size_t start = order_.size();
            order_.push_back(seed);
            for (std::size_t i = start; i < order_.size(); ++i) {
                const NodeId v = order_[i];
                for (NodeId w : g.out(v)) {
                    if (!placed[w]) { placed[w] = 1; order_.push_back(w); }
                }
                for (NodeId w : g.in(v)) {
                    if (!placed[w]) { placed[w] = 1; order_.push_back(w); }
                }
            }
        }
    }

    std::optional<std::vector<NodeId>> run()
    {
        map_.assign(g_.node_count(), kNone);
        used_.assign(h_.node_count(), 0);
        if (extend(0)) return map_;
        return std::nullopt;
    }

private:
    static constexpr NodeId kNone = static_cast<NodeId>(-1);

    static Profile profile(const Digraph& d, NodeId v)
    {
        return {d.out(v).size(), d.in(v).size(), d.has_edge(v, v)};
    }

    bool consistent(NodeId v, NodeId image) const
    {
        for (NodeId w : g_.out(v)) {
            if (map_[w] != kNone && !h_.has_edge(image, map_[w])) return false;
        }
        for (NodeId w : g_.in(v)) {
            if (map_[w] != kNone && !h_.has_edge(map_[w], image)) return false;
        }
        // Degrees match, so edge preservation on mapped neighbours plus equal
        // counts rules out extra h-edges among mapped nodes.
        std::size_t mapped_out = 0, mapped_in = 0;
        for (NodeId w : g_.out(v)) mapped_out += map_[w] != kNone || w == v;
        for (NodeId w : g_.in(v)) mapped_in += map_[w] != kNone || w == v;
        std::size_t used_out = 0, used_in = 0;
        for (NodeId y : h_.out(image)) used_out += used_[y] || y == image;
        for (NodeId y : h_.in(image)) used_in += used_[y] || y == image;
        return mapped_out == used_out && mapped_in == used_in;
    }

    bool extend(std::size_t depth)
    {
        if (depth == order_.size()) return true;
        if (++expansions_ > cap_) {
            throw BudgetExceeded("isomorphism search exceeded " + std::to_string(cap_) + " expansions");
        }
        const NodeId v = order_[depth];
        for (NodeId y = 0; y < h_.node_count(); ++y) {
            if (used_[y] || !(hp_[y] == gp_[v]) || !consistent(v, y)) continue;
            map_[v] = y;
            used_[y] = 1;
            if (extend(depth + 1)) return true;
            map_[v] = kNone;
            used_[y] = 0;
        }
        return false;
    }

    const Digraph& g_;
    const Digraph& h_;
    std::uint64_t cap_;
    std::uint64_t expansions_ = 0;
    std::vector<Profile> gp_, hp_;
    std::vector<NodeId> order_;
    std::vector<NodeId> map_;
    std::vector<char> used_;
};

}  // namespace

std::optional<std::vector<NodeId>> is_isomorphic(const Digraph& g, const Digraph& h,
                                                 const IsoOptions& opts)
{
    if (g.node_count() != h.node_count() || g.edge_count() != h.edge_count()) {
        return std::nullopt;
    }
    auto degs = [](const Digraph& d) {
        std::vector<std::tuple<std::size_t, std::size_t, bool>> p;
        for (NodeId v = 0; v < d.node_count(); ++v) {
            p.emplace_back(d.out(v).size(), d.in(v).size(), d.has_edge(v, v));
        }
        std::sort(p.begin(), p.end());
        return p;
    };
    if (degs(g) != degs(h)) {
        return std::nullopt;
    }
    return IsoSearch(g, h, opts.max_expansions).run();
}

}  // namespace looplab
