#include "looplab/json_io.hpp"

#include "looplab/errors.hpp"

namespace looplab {

namespace {

// Trees beyond this are reported by size only.
constexpr std::uint64_t kMaxTermNodes = 100'000;

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object()) throw ParseError("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
    return *it;
}

std::uint64_t as_index(const Json& j, std::uint64_t bound, const char* what)
{
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw ParseError(std::string(what) + " must be a non-negative integer");
    const auto v = j.get<std::uint64_t>();
    if (v >= bound) throw ParseError(std::string(what) + " out of range");
    return v;
}

std::vector<std::string> string_list(const Json& j, const char* what)
{
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) throw ParseError(std::string(what) + " entries must be strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

// Library validation errors surface as parse errors at the I/O boundary.
template <class F>
auto rethrow_as_parse(F&& f)
{
    try {
        return f();
    } catch (const InvalidParameter& e) {
        throw ParseError(e.what());
    }
}

}  // namespace

Json to_json(const Digraph& g)
{
    Json edges = Json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
    return Json{{"nodes", g.labels()}, {"edges", edges}};
}

Digraph digraph_from_json(const Json& j)
{
    auto labels = string_list(field(j, "nodes"), "nodes");
    const auto& ej = field(j, "edges");
    if (!ej.is_array()) throw ParseError("edges must be an array");
    std::vector<Edge> edges;
    for (const auto& e : ej) {
        if (!e.is_array() || e.size() != 2) throw ParseError("each edge must be a pair");
        edges.emplace_back(static_cast<NodeId>(as_index(e[0], labels.size(), "edge endpoint")),
                           static_cast<NodeId>(as_index(e[1], labels.size(), "edge endpoint")));
    }
    return rethrow_as_parse([&] { return Digraph(std::move(labels), std::move(edges)); });
}

Json hom_to_json(const NodeMap& map)
{
    return Json{{"map", map}};
}

NodeMap hom_from_json(const Json& j)
{
    const auto& mj = field(j, "map");
    if (!mj.is_array()) throw ParseError("map must be an array");
    NodeMap map;
    for (const auto& e : mj) map.push_back(static_cast<NodeId>(as_index(e, UINT32_MAX, "map entry")));
    return map;
}

std::vector<std::optional<NodeId>> pins_from_json(const Json& j)
{
    const auto& mj = field(j, "map");
    if (!mj.is_array()) throw ParseError("map must be an array");
    std::vector<std::optional<NodeId>> pins;
    for (const auto& e : mj) {
        if (e.is_null()) {
            pins.emplace_back();
        } else {
            pins.emplace_back(static_cast<NodeId>(as_index(e, UINT32_MAX, "pin")));
        }
    }
    return pins;
}

Json to_json(const FiniteAlgebra& a)
{
    Json ops = Json::array();
    for (const auto& op : a.ops) {
        Json table = Json::array();
        for (auto v : op.table) table.push_back(static_cast<int>(v));
        ops.push_back(Json{{"name", op.name}, {"arity", op.arity}, {"table", table}});
    }
    return Json{{"size", a.size}, {"ops", ops}};
}

FiniteAlgebra algebra_from_json(const Json& j)
{
    FiniteAlgebra a;
    a.size = as_index(field(j, "size"), kMaxUniverse + 1, "size");
    const auto& oj = field(j, "ops");
    if (!oj.is_array()) throw ParseError("ops must be an array");
    for (const auto& o : oj) {
        Operation op;
        const auto& name = field(o, "name");
        if (!name.is_string()) throw ParseError("op name must be a string");
        op.name = name.get<std::string>();
        op.arity = static_cast<int>(as_index(field(o, "arity"), 64, "arity"));
        const auto& tj = field(o, "table");
        if (!tj.is_array()) throw ParseError("table must be an array");
        for (const auto& v : tj) op.table.push_back(static_cast<Element>(as_index(v, std::max<std::size_t>(a.size, 1), "table entry")));
        a.ops.push_back(std::move(op));
    }
    rethrow_as_parse([&] {
        require_valid(a);
        return 0;
    });
    return a;
}

Json to_json(const Term& t)
{
    if (t.is_var()) return Json{{"var", t.name()}};
    Json args = Json::array();
    for (const auto& c : t.args()) args.push_back(to_json(c));
    return Json{{"op", t.name()}, {"args", args}};
}

Term term_from_json(const Json& j)
{
    if (!j.is_object()) throw ParseError("term must be an object");
    if (auto v = j.find("var"); v != j.end()) {
        if (!v->is_string()) throw ParseError("var must be a string");
        return Term::var(v->get<std::string>());
    }
    const auto& op = field(j, "op");
    if (!op.is_string()) throw ParseError("op must be a string");
    std::vector<Term> args;
    if (auto a = j.find("args"); a != j.end()) {
        if (!a->is_array()) throw ParseError("args must be an array");
        for (const auto& c : *a) args.push_back(term_from_json(c));
    }
    return Term::apply(op.get<std::string>(), std::move(args));
}

Json to_json(const LoopCondition& c)
{
    Json lhs = Json::array(), rhs = Json::array();
    for (auto i : c.lhs) lhs.push_back(c.vars[i]);
    for (auto i : c.rhs) rhs.push_back(c.vars[i]);
    return Json{{"vars", c.vars}, {"lhs", lhs}, {"rhs", rhs}};
}

LoopCondition condition_from_json(const Json& j)
{
    auto vars = string_list(field(j, "vars"), "vars");
    const auto lhs = string_list(field(j, "lhs"), "lhs");
    const auto rhs = string_list(field(j, "rhs"), "rhs");
    return rethrow_as_parse([&] { return LoopCondition::from_names(std::move(vars), lhs, rhs); });
}

Json to_json(const SatisfactionResult& r)
{
    Json out{{"verdict", to_string(r.verdict)}};
    if (r.witness) {
        const auto size = tree_size(*r.witness);
        if (size <= kMaxTermNodes) {
            out["witness"] = to_json(*r.witness);
            out["witness_text"] = to_string(*r.witness);
            out["value"] = to_json(*r.value);
            out["value_text"] = to_string(*r.value);
        }
        out["witness_tree_size"] = size;
        out["identity_verified"] = r.identity_verified;
        out["replay_verified"] = r.replay_verified;
    }
    if (!r.reason.empty()) out["reason"] = r.reason;
    out["stats"] = Json{{"elements", r.stats.elements},
                        {"applications", r.stats.applications},
                        {"closures", r.stats.closures},
                        {"coordinates", r.stats.coordinates},
                        {"assignments", r.stats.assignments}};
    return out;
}

Json to_json(const Classification& k)
{
    Json lengths = Json::array();
    for (const auto& l : k.component_lengths) lengths.push_back(l.to_string());
    Json out{{"trivial", k.trivial},
             {"strongly_connected", k.strongly_connected},
             {"weakly_connected", k.weakly_connected},
             {"algebraic_length", k.algebraic_length.to_string()},
             {"class", to_string(k.cls)}};
    if (k.cls == ConditionClass::cyclic) out["radical"] = k.radical;
    out["strong_components"] = k.strong_component_count;
    out["component_lengths"] = lengths;
    return out;
}

}  // namespace looplab
