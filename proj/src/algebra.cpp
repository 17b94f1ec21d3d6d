#include "looplab/algebra.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "looplab/errors.hpp"

namespace looplab {

Element Operation::apply(std::span<const Element> args, std::size_t n) const
{
    std::size_t idx = 0;
    for (auto x : args) idx = idx * n + x;
    return table[idx];
}

const Operation* FiniteAlgebra::find(const std::string& name) const
{
    for (const auto& op : ops) {
        if (op.name == name) return &op;
    }
    return nullptr;
}

namespace {

std::size_t ipow(std::size_t base, std::size_t exp)
{
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && r > (std::size_t{1} << 40) / base) {
            throw InvalidParameter("table size overflow");
        }
        r *= base;
    }
    return r;
}

}  // namespace

AlgebraReport validate_algebra(const FiniteAlgebra& a)
{
    AlgebraReport rep;
    if (a.size == 0) rep.errors.push_back("universe is empty");
    if (a.size > kMaxUniverse) rep.errors.push_back("universe larger than 256");
    std::set<std::string> names;
    for (const auto& op : a.ops) {
        bool idem = true;
        if (!names.insert(op.name).second) rep.errors.push_back("duplicate operation '" + op.name + "'");
        if (op.arity < 0) {
            rep.errors.push_back("operation '" + op.name + "' has negative arity");
            rep.idempotent.push_back(false);
            continue;
        }
        std::size_t expected = 0;
        try {
            expected = ipow(a.size, static_cast<std::size_t>(op.arity));
        } catch (const InvalidParameter&) {
            rep.errors.push_back("operation '" + op.name + "' table too large");
        }
        if (op.table.size() != expected) {
            rep.errors.push_back("operation '" + op.name + "' has " + std::to_string(op.table.size()) +
                                 " entries, expected " + std::to_string(expected));
            idem = false;
        } else if (std::any_of(op.table.begin(), op.table.end(), [&](Element v) { return v >= a.size; })) {
            rep.errors.push_back("operation '" + op.name + "' has a value out of range");
            idem = false;
        } else if (op.arity == 0) {
            idem = a.size == 1;
        } else {
            std::vector<Element> args(static_cast<std::size_t>(op.arity));
            for (std::size_t x = 0; x < a.size && idem; ++x) {
                std::fill(args.begin(), args.end(), static_cast<Element>(x));
                idem = op.apply(args, a.size) == x;
            }
        }
        rep.idempotent.push_back(idem);
    }
    return rep;
}

void require_valid(const FiniteAlgebra& a)
{
    const auto rep = validate_algebra(a);
    if (!rep.ok()) throw InvalidParameter(rep.errors.front());
}

Operation make_operation(std::string name, int arity, std::size_t n,
                         const std::function<Element(std::span<const Element>)>& f)
{
    Operation op{std::move(name), arity, {}};
    const auto rows = ipow(n, static_cast<std::size_t>(arity));
    op.table.resize(rows);
    std::vector<Element> args(static_cast<std::size_t>(arity), 0);
    for (std::size_t r = 0; r < rows; ++r) {
        auto rest = r;
        for (int i = arity - 1; i >= 0; --i) {
            args[static_cast<std::size_t>(i)] = static_cast<Element>(rest % n);
            rest /= n;
        }
        op.table[r] = f(args);
    }
    return op;
}

bool is_compatible(const FiniteAlgebra& a, const Digraph& g)
{
    if (g.node_count() != a.size) throw InvalidParameter("digraph universe differs from algebra");
    const auto& edges = g.edges();
    for (const auto& op : a.ops) {
        const auto k = static_cast<std::size_t>(op.arity);
        if (k == 0) {
            if (!g.has_edge(op.table[0], op.table[0])) return false;
            continue;
        }
        if (edges.empty()) continue;
        std::vector<std::size_t> pick(k, 0);
        std::vector<Element> xs(k), ys(k);
        while (true) {
            for (std::size_t i = 0; i < k; ++i) {
                xs[i] = static_cast<Element>(edges[pick[i]].first);
                ys[i] = static_cast<Element>(edges[pick[i]].second);
            }
            if (!g.has_edge(op.apply(xs, a.size), op.apply(ys, a.size))) return false;
            std::size_t pos = k;
            while (pos > 0 && ++pick[pos - 1] == edges.size()) pick[--pos] = 0;
            if (pos == 0) break;
        }
    }
    return true;
}

// --- terms --------------------------------------------------------------------

Term Term::var(std::string name)
{
    return Term(std::make_shared<const Node>(Node{true, std::move(name), {}}));
}

Term Term::apply(std::string op, std::vector<Term> args)
{
    return Term(std::make_shared<const Node>(Node{false, std::move(op), std::move(args)}));
}

bool operator==(const Term& a, const Term& b)
{
    if (a.node_ == b.node_) return true;
    if (a.is_var() != b.is_var() || a.name() != b.name() || a.args().size() != b.args().size()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (!(a.args()[i] == b.args()[i])) return false;
    }
    return true;
}

std::string to_string(const Term& t)
{
    if (t.is_var()) return t.name();
    std::string s = t.name() + "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) s += ",";
        s += to_string(t.args()[i]);
    }
    return s + ")";
}

std::uint64_t tree_size(const Term& t, std::uint64_t cap)
{
    std::unordered_map<const void*, std::uint64_t> memo;
    std::function<std::uint64_t(const Term&)> rec = [&](const Term& u) -> std::uint64_t {
        if (auto it = memo.find(u.id()); it != memo.end()) return it->second;
        std::uint64_t s = 1;
        for (const auto& c : u.args()) s = std::min(cap, s + rec(c));
        memo.emplace(u.id(), s);
        return s;
    };
    return rec(t);
}

std::vector<std::string> variables(const Term& t)
{
    std::set<std::string> out;
    std::set<const void*> seen;
    std::function<void(const Term&)> rec = [&](const Term& u) {
        if (!seen.insert(u.id()).second) return;
        if (u.is_var()) {
            out.insert(u.name());
            return;
        }
        for (const auto& c : u.args()) rec(c);
    };
    rec(t);
    return {out.begin(), out.end()};
}

Term substitute(const Term& t, const std::map<std::string, Term>& sub)
{
    std::unordered_map<const void*, Term> memo;
    std::function<Term(const Term&)> rec = [&](const Term& u) -> Term {
        if (auto it = memo.find(u.id()); it != memo.end()) return it->second;
        Term r = u;
        if (u.is_var()) {
            if (auto s = sub.find(u.name()); s != sub.end()) r = s->second;
        } else {
            std::vector<Term> args;
            for (const auto& c : u.args()) args.push_back(rec(c));
            r = Term::apply(u.name(), std::move(args));
        }
        memo.emplace(u.id(), r);
        return r;
    };
    return rec(t);
}

namespace {

const Operation& lookup_op(const FiniteAlgebra& a, const Term& t)
{
    const auto* op = a.find(t.name());
    if (!op) throw InvalidParameter("unknown operation '" + t.name() + "'");
    if (static_cast<std::size_t>(op->arity) != t.args().size()) {
        throw InvalidParameter("operation '" + t.name() + "' applied to " + std::to_string(t.args().size()) +
                               " arguments, arity is " + std::to_string(op->arity));
    }
    return *op;
}

}  // namespace

Element eval_term(const FiniteAlgebra& a, const Term& t, const std::map<std::string, Element>& env)
{
    std::unordered_map<const void*, Element> memo;
    std::function<Element(const Term&)> rec = [&](const Term& u) -> Element {
        if (auto it = memo.find(u.id()); it != memo.end()) return it->second;
        Element v;
        if (u.is_var()) {
            auto it = env.find(u.name());
            if (it == env.end()) throw InvalidParameter("unbound variable '" + u.name() + "'");
            v = it->second;
        } else {
            const auto& op = lookup_op(a, u);
            std::vector<Element> args;
            for (const auto& c : u.args()) args.push_back(rec(c));
            v = op.apply(args, a.size);
        }
        memo.emplace(u.id(), v);
        return v;
    };
    return rec(t);
}

std::vector<Element> eval_term_columns(const FiniteAlgebra& a, const Term& t,
                                       const std::map<std::string, std::vector<Element>>& env,
                                       std::size_t width)
{
    std::unordered_map<const void*, std::vector<Element>> memo;
    std::function<const std::vector<Element>&(const Term&)> rec = [&](const Term& u) -> const std::vector<Element>& {
        if (auto it = memo.find(u.id()); it != memo.end()) return it->second;
        std::vector<Element> v;
        if (u.is_var()) {
            auto it = env.find(u.name());
            if (it == env.end()) throw InvalidParameter("unbound variable '" + u.name() + "'");
            if (it->second.size() != width) throw InvalidParameter("binding width mismatch");
            v = it->second;
        } else {
            const auto& op = lookup_op(a, u);
            std::vector<const std::vector<Element>*> cols;
            for (const auto& c : u.args()) cols.push_back(&rec(c));
            v.resize(width);
            std::vector<Element> args(cols.size());
            for (std::size_t i = 0; i < width; ++i) {
                for (std::size_t j = 0; j < cols.size(); ++j) args[j] = (*cols[j])[i];
                v[i] = op.apply(args, a.size);
            }
        }
        return memo.emplace(u.id(), std::move(v)).first->second;
    };
    return rec(t);
}

}  // namespace looplab
