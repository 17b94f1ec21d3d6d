#include <algorithm>
#include <cctype>

#include "looplab/errors.hpp"
#include "looplab/families.hpp"
#include "looplab/loopcond.hpp"

namespace looplab {

NameCall parse_name_call(const std::string& text)
{
    NameCall call;
    std::size_t i = 0;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i;
    }
    call.name = text.substr(0, i);
    if (call.name.empty()) throw ParseError("expected a name in '" + text + "'");
    auto number = [&](std::size_t& pos) {
        std::size_t start = pos;
        if (pos < text.size() && text[pos] == '-') ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start || (text[start] == '-' && pos == start + 1)) {
            throw ParseError("expected a number in '" + text + "'");
        }
        return std::stol(text.substr(start, pos - start));
    };
    if (i == text.size()) return call;
    if (text[i] == '(') {
        ++i;
        while (true) {
            while (i < text.size() && text[i] == ' ') ++i;
            call.args.push_back(number(i));
            while (i < text.size() && text[i] == ' ') ++i;
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            if (i < text.size() && text[i] == ')') {
                ++i;
                break;
            }
            throw ParseError("malformed argument list in '" + text + "'");
        }
    } else if (text[i] == '-') {
        while (i < text.size() && text[i] == '-') {
            ++i;
            call.args.push_back(number(i));
        }
    }
    if (i != text.size()) throw ParseError("trailing characters in '" + text + "'");
    return call;
}

namespace {

void expect_args(const NameCall& call, std::size_t count)
{
    if (call.args.size() != count) {
        throw InvalidParameter("'" + call.name + "' takes " + std::to_string(count) + " parameter(s)");
    }
}

bool is_prime(long p)
{
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

LoopCondition from_edges(std::vector<std::string> vars, const std::vector<std::pair<std::string, std::string>>& edges)
{
    std::vector<std::string> lhs, rhs;
    for (const auto& [u, v] : edges) {
        lhs.push_back(u);
        rhs.push_back(v);
    }
    return LoopCondition::from_names(std::move(vars), lhs, rhs);
}

std::vector<std::string> numbered(const std::string& stem, long n)
{
    std::vector<std::string> out;
    for (long i = 1; i <= n; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

}  // namespace

FiniteAlgebra builtin_algebra(const std::string& name)
{
    const auto call = parse_name_call(name);
    FiniteAlgebra a;
    a.size = 2;
    if (call.name == "projections2") {
        expect_args(call, 0);
        a.ops.push_back(make_operation("pr1", 2, 2, [](auto x) { return x[0]; }));
        a.ops.push_back(make_operation("pr2", 2, 2, [](auto x) { return x[1]; }));
    } else if (call.name == "semilattice2") {
        expect_args(call, 0);
        a.ops.push_back(make_operation("min", 2, 2, [](auto x) { return std::min(x[0], x[1]); }));
    } else if (call.name == "majority2") {
        expect_args(call, 0);
        a.ops.push_back(make_operation("maj", 3, 2, [](auto x) {
            return static_cast<Element>(x[0] + x[1] + x[2] >= 2 ? 1 : 0);
        }));
    } else if (call.name == "nu4") {
        expect_args(call, 0);
        // Majority of four with ties broken by the first argument.
        a.ops.push_back(make_operation("nu", 4, 2, [](auto x) {
            const int ones = x[0] + x[1] + x[2] + x[3];
            if (ones == 2) return x[0];
            return static_cast<Element>(ones > 2 ? 1 : 0);
        }));
    } else if (call.name == "affine") {
        expect_args(call, 1);
        const long p = call.args[0];
        if (!is_prime(p) || p > 7) throw InvalidParameter("affine(p) needs a prime p <= 7");
        a.size = static_cast<std::size_t>(p);
        a.ops.push_back(make_operation("m", 3, a.size, [p](auto x) {
            return static_cast<Element>(((x[0] - x[1] + x[2]) % p + p) % p);
        }));
    } else {
        throw InvalidParameter("unknown algebra '" + name + "'");
    }
    return a;
}

LoopCondition cyclic_condition(std::size_t n)
{
    if (n < 1) throw InvalidParameter("cyclic(n) needs n >= 1");
    auto vars = numbered("x", static_cast<long>(n));
    std::vector<std::string> rhs(vars.begin() + 1, vars.end());
    rhs.push_back(vars.front());
    return LoopCondition::from_names(vars, vars, rhs);
}

LoopCondition builtin_condition(const std::string& name)
{
    const auto call = parse_name_call(name);
    if (call.name == "siggers6") {
        expect_args(call, 0);
        return LoopCondition::from_names({"x", "y", "z"}, {"x", "x", "y", "y", "z", "z"},
                                         {"y", "z", "z", "x", "x", "y"});
    }
    if (call.name == "siggers4") {
        expect_args(call, 0);
        return LoopCondition::from_names({"r", "a", "e"}, {"r", "a", "r", "e"}, {"a", "r", "e", "a"});
    }
    if (call.name == "maltsev") {
        expect_args(call, 0);
        return LoopCondition::from_names({"x", "y", "z"}, {"y", "x", "x"}, {"z", "z", "y"});
    }
    if (call.name == "cyclic") {
        expect_args(call, 1);
        if (call.args[0] < 1) throw InvalidParameter("cyclic(n) needs n >= 1");
        return cyclic_condition(static_cast<std::size_t>(call.args[0]));
    }
    if (call.name == "cone") {
        expect_args(call, 1);
        const long n = call.args[0];
        if (n < 1) throw InvalidParameter("cone(n) needs n >= 1");
        auto vars = numbered("c", n);
        std::vector<std::pair<std::string, std::string>> edges;
        for (long i = 0; i < n; ++i) edges.emplace_back(vars[i], vars[(i + 1) % n]);
        for (long i = 0; i < n; ++i) edges.emplace_back("a", vars[i]);
        edges.emplace_back("b", "a");
        vars.push_back("a");
        vars.push_back("b");
        return from_edges(std::move(vars), edges);
    }
    if (call.name == "totally_symmetric_clique" || call.name == "sym_cycle_condition") {
        expect_args(call, 1);
        const long m = call.args[0];
        const bool clique = call.name.front() == 't';
        if (m < (clique ? 1 : 3)) throw InvalidParameter(call.name + " parameter too small");
        const auto g = make_basic(clique ? BasicKind::clique : BasicKind::sym_cycle, static_cast<std::size_t>(m));
        auto vars = numbered("x", m);
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& [u, v] : g.edges()) edges.emplace_back(vars[u], vars[v]);
        if (edges.empty()) throw InvalidParameter(call.name + " has no edges");
        return from_edges(std::move(vars), edges);
    }
    if (call.name == "dcp") {
        expect_args(call, 2);
        if (call.args[0] < 1 || call.args[1] < 1) throw InvalidParameter("dcp(a,b) needs a, b >= 1");
        return condition_from_digraph(dcp(static_cast<std::size_t>(call.args[0]), static_cast<std::size_t>(call.args[1])));
    }
    throw InvalidParameter("unknown condition '" + name + "'");
}

std::vector<std::string> builtin_algebra_names()
{
    return {"projections2", "semilattice2", "majority2", "affine(2)", "affine(3)", "affine(5)", "affine(7)", "nu4"};
}

std::vector<std::string> builtin_condition_examples()
{
    return {"siggers6",
            "siggers4",
            "maltsev",
            "cyclic(2)",
            "cyclic(3)",
            "cyclic(4)",
            "cone(2)",
            "cone(3)",
            "totally_symmetric_clique(3)",
            "sym_cycle_condition(5)",
            "dcp(2,3)"};
}

}  // namespace looplab
