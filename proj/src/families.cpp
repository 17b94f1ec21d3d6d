#include "looplab/families.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "looplab/errors.hpp"

namespace looplab {

std::string encode(const FamilyNode& node)
{
    std::string out;
    for (std::size_t i = 0; i < node.letters.size(); ++i) {
        if (i > 0) {
            const int sep = node.separators[i - 1];
            out += sep == kNone ? std::string("|.|") : "|L" + std::to_string(sep) + "|";
        }
        out += std::to_string(node.letters[i]);
    }
    return out;
}

FamilyNode decode_family_node(const std::string& text)
{
    FamilyNode node;
    std::size_t pos = 0;
    std::size_t field = 0;
    while (pos <= text.size()) {
        auto bar = text.find('|', pos);
        if (bar == std::string::npos) bar = text.size();
        const auto tok = text.substr(pos, bar - pos);
        try {
            if (field % 2 == 0) {
                std::size_t used = 0;
                node.letters.push_back(std::stoi(tok, &used));
                if (used != tok.size()) throw ParseError("bad letter");
            } else if (tok == ".") {
                node.separators.push_back(kNone);
            } else if (tok.size() >= 2 && tok[0] == 'L') {
                node.separators.push_back(std::stoi(tok.substr(1)));
            } else {
                throw ParseError("bad separator");
            }
        } catch (const std::logic_error&) {
            throw ParseError("malformed family node '" + text + "'");
        }
        ++field;
        pos = bar + 1;
    }
    if (node.letters.size() != node.separators.size() + 1) {
        throw ParseError("malformed family node '" + text + "'");
    }
    return node;
}

FamilyNode prefix(const FamilyNode& node)
{
    FamilyNode p;
    p.letters.assign(node.letters.begin(), node.letters.end() - 1);
    p.separators.assign(node.separators.begin(), node.separators.end() - 1);
    return p;
}

FamilyNode suffix(const FamilyNode& node)
{
    FamilyNode p;
    p.letters.assign(node.letters.begin() + 1, node.letters.end());
    p.separators.assign(node.separators.begin() + 1, node.separators.end());
    return p;
}

std::optional<NodeId> FamilyGraph::find(const FamilyNode& node) const
{
    auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
    if (it == nodes.end() || !(*it == node)) return std::nullopt;
    return static_cast<NodeId>(it - nodes.begin());
}

NodeId dcp_a(std::size_t, std::size_t, std::size_t i)
{
    return static_cast<NodeId>(i);
}

NodeId dcp_b(std::size_t a, std::size_t, std::size_t j)
{
    return j == 0 ? 0 : static_cast<NodeId>(a + j - 1);
}

Digraph dcp(std::size_t a, std::size_t b)
{
    if (a == 0 || b == 0) throw InvalidParameter("dcp needs a, b >= 1");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < a; ++i) labels.push_back("A" + std::to_string(i));
    for (std::size_t j = 1; j < b; ++j) labels.push_back("B" + std::to_string(j));
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < a; ++i) edges.emplace_back(dcp_a(a, b, i), dcp_a(a, b, (i + 1) % a));
    for (std::size_t j = 0; j < b; ++j) edges.emplace_back(dcp_b(a, b, j), dcp_b(a, b, (j + 1) % b));
    return Digraph(std::move(labels), std::move(edges));
}

namespace {

bool distinct_loop_symbols(const FamilyNode& node, int loop_symbols)
{
    std::vector<char> used(static_cast<std::size_t>(loop_symbols) + 1, 0);
    for (int s : node.separators) {
        if (s < 0 || s > loop_symbols) return false;
        if (s != kNone) {
            if (used[s]) return false;
            used[s] = 1;
        }
    }
    return true;
}

bool letters_in_range(const FamilyNode& node, int alphabet)
{
    return std::all_of(node.letters.begin(), node.letters.end(),
                       [&](int a) { return a >= 0 && a < alphabet; });
}

bool well_shaped(const FamilyNode& node)
{
    return !node.letters.empty() && node.separators.size() + 1 == node.letters.size();
}

std::vector<int> cycle_steps(int a, int c)
{
    std::vector<int> next{(a + 1) % c, (a + c - 1) % c};
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    return next;
}

// Depth-first generation; callers sort the result.
// `allowed` lists the candidate next letters for a given partial node and
// separator choice.
template <typename Allowed>
void generate(int k, int loop_symbols, int alphabet, Allowed&& allowed, std::vector<FamilyNode>& out)
{
    FamilyNode cur;
    std::vector<char> used(static_cast<std::size_t>(loop_symbols) + 1, 0);
    std::function<void()> rec = [&]() {
        if (static_cast<int>(cur.letters.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int sep = 0; sep <= loop_symbols; ++sep) {
            if (sep != kNone && used[sep]) continue;
            for (int a : allowed(cur, sep)) {
                cur.separators.push_back(sep);
                cur.letters.push_back(a);
                if (sep != kNone) used[sep] = 1;
                rec();
                if (sep != kNone) used[sep] = 0;
                cur.separators.pop_back();
                cur.letters.pop_back();
            }
        }
    };
    for (int a = 0; a < alphabet; ++a) {
        cur.letters.assign(1, a);
        cur.separators.clear();
        rec();
    }
}

FamilyGraph build(std::vector<FamilyNode> nodes, const std::vector<FamilyNode>& longer)
{
    FamilyGraph fg;
    fg.nodes = std::move(nodes);
    std::vector<std::string> labels;
    labels.reserve(fg.nodes.size());
    for (const auto& n : fg.nodes) labels.push_back(encode(n));
    std::vector<Edge> edges;
    edges.reserve(longer.size());
    for (const auto& n : longer) {
        auto a = fg.find(prefix(n));
        auto b = fg.find(suffix(n));
        if (!a || !b) throw Error("family prefix/suffix is not a node");
        edges.emplace_back(*a, *b);
    }
    fg.graph = Digraph(std::move(labels), std::move(edges));
    return fg;
}

void check_params(int k, int loop_symbols, int alphabet)
{
    if (k < 1 || loop_symbols < 0 || alphabet < 1) {
        throw InvalidParameter("family parameters need k >= 1, l >= 0, alphabet >= 1");
    }
}

}  // namespace

bool is_cclw_node(const FamilyNode& node, int loop_symbols, int cycle)
{
    if (!well_shaped(node) || !letters_in_range(node, cycle) || !distinct_loop_symbols(node, loop_symbols)) {
        return false;
    }
    for (std::size_t i = 0; i + 1 < node.letters.size(); ++i) {
        const int a = node.letters[i], b = node.letters[i + 1];
        if (node.separators[i] != kNone) {
            if (a != b) return false;
        } else if ((b - a - 1 + 2 * cycle) % cycle != 0 && (b - a + 1 + 2 * cycle) % cycle != 0) {
            return false;
        }
    }
    return true;
}

bool is_clqp_node(const FamilyNode& node, int loop_symbols, int alphabet)
{
    if (!well_shaped(node) || !letters_in_range(node, alphabet) ||
        !distinct_loop_symbols(node, loop_symbols)) {
        return false;
    }
    const auto k = node.letters.size();
    for (std::size_t i = 0; i < k; ++i) {
        bool chained = true;
        for (std::size_t j = i + 1; j < k; ++j) {
            chained = chained && node.separators[j - 1] != kNone;
            if ((node.letters[i] == node.letters[j]) != chained) return false;
        }
    }
    return true;
}

std::vector<FamilyNode> cclw_nodes(int k, int loop_symbols, int cycle)
{
    check_params(k, loop_symbols, cycle);
    std::vector<FamilyNode> out;
    generate(k, loop_symbols, cycle,
             [&](const FamilyNode& cur, int sep) {
                 const int a = cur.letters.back();
                 return sep == kNone ? cycle_steps(a, cycle) : std::vector<int>{a};
             },
             out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FamilyNode> clqp_nodes(int k, int loop_symbols, int alphabet)
{
    check_params(k, loop_symbols, alphabet);
    std::vector<FamilyNode> out;
    generate(k, loop_symbols, alphabet,
             [&](const FamilyNode& cur, int sep) {
                 if (sep != kNone) return std::vector<int>{cur.letters.back()};
                 // A NONE separator breaks every chain: the new letter is fresh.
                 std::vector<int> fresh;
                 for (int a = 0; a < alphabet; ++a) {
                     if (std::find(cur.letters.begin(), cur.letters.end(), a) == cur.letters.end()) {
                         fresh.push_back(a);
                     }
                 }
                 return fresh;
             },
             out);
    std::sort(out.begin(), out.end());
    return out;
}

FamilyGraph cclw(int k, int loop_symbols, int cycle)
{
    return build(cclw_nodes(k, loop_symbols, cycle), cclw_nodes(k + 1, loop_symbols, cycle));
}

FamilyGraph clqp(int k, int loop_symbols, int alphabet)
{
    return build(clqp_nodes(k, loop_symbols, alphabet), clqp_nodes(k + 1, loop_symbols, alphabet));
}

RaiseIso clqp_raise_iso(int k, int s)
{
    if (k < 1 || s < 1) throw InvalidParameter("clqp raise needs k, s >= 1");
    RaiseIso r{clqp(k, 0, s), clqp(k + 1, s, 1), {}};
    r.map.resize(r.from.nodes.size());
    for (NodeId v = 0; v < r.from.nodes.size(); ++v) {
        const auto& n = r.from.nodes[v];
        FamilyNode img;
        img.letters.assign(static_cast<std::size_t>(k) + 1, 0);
        for (int a : n.letters) img.separators.push_back(a + 1);
        auto idx = r.to.find(img);
        if (!idx) throw VerificationFailed("raise image " + encode(img) + " is not a node");
        r.map[v] = *idx;
    }
    // Bijective, and edge-preserving in both directions.
    NodeMap inverse(r.to.nodes.size(), static_cast<NodeId>(-1));
    for (NodeId v = 0; v < r.map.size(); ++v) {
        if (inverse[r.map[v]] != static_cast<NodeId>(-1)) throw VerificationFailed("raise map not injective");
        inverse[r.map[v]] = v;
    }
    if (std::find(inverse.begin(), inverse.end(), static_cast<NodeId>(-1)) != inverse.end()) {
        throw VerificationFailed("raise map not surjective");
    }
    if (!verify_hom(r.from.graph, r.to.graph, r.map) || !verify_hom(r.to.graph, r.from.graph, inverse)) {
        throw VerificationFailed("raise map is not an isomorphism");
    }
    return r;
}

namespace {

int last_symbol_position(const FamilyNode& n, int symbol)
{
    for (std::size_t i = 0; i < n.separators.size(); ++i) {
        if (n.separators[i] == symbol) return static_cast<int>(i);
    }
    return -1;
}

using LetterMap = std::function<int(int)>;

FamilyNode relabel(const FamilyNode& n, const LetterMap& u)
{
    FamilyNode out = n;
    for (auto& a : out.letters) a = u(a);
    return out;
}

// Node carrying symbol `symbol` at position i: letters up to i via `left`,
// separator i becomes NONE, the rest via `right`.
FamilyNode split_map(const FamilyNode& n, int symbol, const LetterMap& left, const LetterMap& right)
{
    const int i = last_symbol_position(n, symbol);
    FamilyNode out = n;
    for (std::size_t j = 0; j < out.letters.size(); ++j) {
        out.letters[j] = static_cast<int>(j) <= i ? left(n.letters[j]) : right(n.letters[j]);
    }
    out.separators[i] = kNone;
    return out;
}

NodeId locate(const FamilyGraph& g, const FamilyNode& n)
{
    auto idx = g.find(n);
    if (!idx) throw VerificationFailed("image " + encode(n) + " is not a node of the target");
    return *idx;
}

ReduceWitness reduce_witness(FamilyGraph big, FamilyGraph base, FamilyGraph target, int l,
                             const std::vector<LetterMap>& embeddings,
                             const std::vector<std::pair<int, int>>& pairs)
{
    ReduceWitness w{std::move(big), std::move(base), std::move(target), {}, {}};
    for (const auto& u : embeddings) {
        NodeMap m(w.base.nodes.size());
        for (NodeId v = 0; v < m.size(); ++v) m[v] = locate(w.target, relabel(w.base.nodes[v], u));
        w.embeddings.push_back(std::move(m));
    }

    // Split the big digraph into the base part and V (nodes with L_l).
    const auto bn = w.big.nodes.size();
    std::vector<std::int64_t> base_index(bn, -1), v_index(bn, -1);
    std::vector<NodeId> v_nodes;
    for (NodeId v = 0; v < bn; ++v) {
        if (last_symbol_position(w.big.nodes[v], l) >= 0) {
            v_index[v] = static_cast<std::int64_t>(v_nodes.size());
            v_nodes.push_back(v);
        } else {
            base_index[v] = locate(w.base, w.big.nodes[v]);
        }
    }
    const auto nb = static_cast<NodeId>(w.base.nodes.size());
    const auto nv = static_cast<NodeId>(v_nodes.size());
    // Template layout: [0, nb) base copy 0, [nb, nb+nv) V, [nb+nv, 2nb+nv) base copy 1.
    std::vector<std::string> labels;
    for (const auto& n : w.base.nodes) labels.push_back("0:" + encode(n));
    for (auto v : v_nodes) labels.push_back("V:" + encode(w.big.nodes[v]));
    for (const auto& n : w.base.nodes) labels.push_back("1:" + encode(n));
    std::vector<Edge> edges;
    for (const auto& [x, y] : w.big.graph.edges()) {
        const bool xb = base_index[x] >= 0, yb = base_index[y] >= 0;
        if (xb && yb) {
            const auto a = static_cast<NodeId>(base_index[x]), b = static_cast<NodeId>(base_index[y]);
            edges.emplace_back(a, b);
            edges.emplace_back(nb + nv + a, nb + nv + b);
        } else if (!xb && !yb) {
            edges.emplace_back(nb + static_cast<NodeId>(v_index[x]), nb + static_cast<NodeId>(v_index[y]));
        } else if (xb) {
            edges.emplace_back(static_cast<NodeId>(base_index[x]), nb + static_cast<NodeId>(v_index[y]));
        } else {
            edges.emplace_back(nb + static_cast<NodeId>(v_index[x]), nb + nv + static_cast<NodeId>(base_index[y]));
        }
    }
    const Digraph tmpl(std::move(labels), std::move(edges));

    for (const auto& [p, q] : pairs) {
        ReducePair rp{p, q, tmpl, NodeMap(tmpl.node_count())};
        for (NodeId v = 0; v < nb; ++v) {
            rp.map[v] = w.embeddings[p][v];
            rp.map[nb + nv + v] = w.embeddings[q][v];
        }
        for (NodeId i = 0; i < nv; ++i) {
            rp.map[nb + i] = locate(w.target, split_map(w.big.nodes[v_nodes[i]], l, embeddings[p], embeddings[q]));
        }
        for (const auto& [x, y] : tmpl.edges()) {
            if (!w.target.graph.has_edge(rp.map[x], rp.map[y])) {
                throw VerificationFailed("pair (" + std::to_string(p) + "," + std::to_string(q) + "): edge " +
                                         tmpl.label(x) + " -> " + tmpl.label(y) + " maps to non-edge " +
                                         w.target.graph.label(rp.map[x]) + " -> " +
                                         w.target.graph.label(rp.map[y]));
            }
        }
        w.pairs.push_back(std::move(rp));
    }
    return w;
}

}  // namespace

ReduceWitness clqp_reduce_witness(int k, int l, int s)
{
    if (k < 2 || l < 1 || s < 1) throw InvalidParameter("clqp reduce needs k >= 2, l >= 1, s >= 1");
    std::vector<LetterMap> u;
    for (int p = 0; p < 3; ++p) u.push_back([p, s](int a) { return a + p * s; });
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) {
            if (p != q) pairs.emplace_back(p, q);
        }
    }
    return reduce_witness(clqp(k, l, s), clqp(k, l - 1, s), clqp(k, l - 1, 3 * s), l, u, pairs);
}

ReduceWitness cclw_reduce_witness(int k, int l, int c)
{
    if (k < 2 || l < 1 || c < 3 || c % 2 == 0) {
        throw InvalidParameter("cclw reduce needs k >= 2, l >= 1, odd c >= 3");
    }
    std::vector<LetterMap> u;
    for (int x = 0; x < c; ++x) u.push_back([x, c](int a) { return (a + x) % c; });
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < c; ++x) {
        pairs.emplace_back(x, (x + 1) % c);
        pairs.emplace_back(x, (x + c - 1) % c);
    }
    auto base = cclw(k, l - 1, c);
    auto target = base;
    return reduce_witness(cclw(k, l, c), std::move(base), std::move(target), l, u, pairs);
}

bool clqp_embeds_in_cclw(int k, int l, int c)
{
    const auto small = clqp(k, l, 1);
    const auto big = cclw(k, l, c);
    std::vector<NodeId> image;
    for (const auto& n : small.nodes) {
        auto idx = big.find(n);
        if (!idx) return false;
        image.push_back(*idx);
    }
    return induced_subgraph(big.graph, image).edges() == small.graph.edges();
}

}  // namespace looplab
