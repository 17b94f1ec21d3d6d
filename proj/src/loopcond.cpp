#include "looplab/loopcond.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

#include "looplab/errors.hpp"

namespace looplab {

LoopCondition LoopCondition::from_names(std::vector<std::string> vars, const std::vector<std::string>& lhs,
                                        const std::vector<std::string>& rhs)
{
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (!index.emplace(vars[i], i).second) throw InvalidParameter("duplicate variable '" + vars[i] + "'");
    }
    auto resolve = [&](const std::vector<std::string>& side) {
        std::vector<std::size_t> out;
        for (const auto& v : side) {
            auto it = index.find(v);
            if (it == index.end()) throw InvalidParameter("undeclared variable '" + v + "'");
            out.push_back(it->second);
        }
        return out;
    };
    LoopCondition c{std::move(vars), resolve(lhs), resolve(rhs)};
    validate_condition(c);
    return c;
}

void validate_condition(const LoopCondition& c)
{
    if (c.lhs.empty()) throw InvalidParameter("condition tuples are empty");
    if (c.lhs.size() != c.rhs.size()) throw InvalidParameter("lhs and rhs lengths differ");
    std::set<std::string> names(c.vars.begin(), c.vars.end());
    if (names.size() != c.vars.size()) throw InvalidParameter("duplicate variable");
    for (std::size_t i = 0; i < c.lhs.size(); ++i) {
        if (c.lhs[i] >= c.vars.size() || c.rhs[i] >= c.vars.size()) {
            throw InvalidParameter("tuple entry is not a declared variable");
        }
    }
}

Digraph condition_digraph(const LoopCondition& c)
{
    validate_condition(c);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < c.lhs.size(); ++i) {
        edges.emplace_back(static_cast<NodeId>(c.lhs[i]), static_cast<NodeId>(c.rhs[i]));
    }
    return Digraph(c.vars, std::move(edges));
}

LoopCondition condition_from_digraph(const Digraph& g)
{
    LoopCondition c;
    c.vars = g.labels();
    for (const auto& [u, v] : g.edges()) {
        c.lhs.push_back(u);
        c.rhs.push_back(v);
    }
    validate_condition(c);
    return c;
}

bool is_trivial(const LoopCondition& c)
{
    for (std::size_t i = 0; i < c.lhs.size(); ++i) {
        if (c.lhs[i] == c.rhs[i]) return true;
    }
    return false;
}

std::optional<NodeMap> implies_by_hom(const LoopCondition& c1, const LoopCondition& c2)
{
    const auto g1 = condition_digraph(c1);
    const auto g2 = condition_digraph(c2);
    auto r = find_hom({g1, g2, {}});
    if (r.status == HomStatus::budget_exceeded) throw BudgetExceeded("homomorphism search budget exceeded");
    if (r.status == HomStatus::none) return std::nullopt;
    return r.map;
}

std::string to_string(Verdict v)
{
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::undecided: return "undecided";
    }
    return "?";
}

std::vector<std::string> position_names(std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back("p" + std::to_string(i));
    return out;
}

namespace {

// Assignments of the condition's variables, variable 0 most significant.
class Assignments {
public:
    Assignments(std::size_t n, std::size_t vars, std::size_t limit) : n_(n), vars_(vars)
    {
        count_ = 1;
        for (std::size_t i = 0; i < vars; ++i) {
            if (count_ > limit / n) {
                count_ = 0;
                return;
            }
            count_ *= n;
        }
        if (count_ > limit) count_ = 0;
    }

    /// Zero when the count exceeds the limit.
    std::size_t count() const { return count_; }

    Element value(std::size_t sigma, std::size_t var) const
    {
        for (std::size_t i = var + 1; i < vars_; ++i) sigma /= n_;
        return static_cast<Element>(sigma % n_);
    }

    /// For each assignment, the value of `var`.
    std::vector<Element> column(std::size_t var) const
    {
        std::vector<Element> col(count_);
        for (std::size_t s = 0; s < count_; ++s) col[s] = value(s, var);
        return col;
    }

private:
    std::size_t n_, vars_, count_ = 0;
};

struct PositionalColumns {
    std::map<std::string, std::vector<Element>> lhs, rhs;
};

PositionalColumns positional_columns(const LoopCondition& c, const Assignments& as)
{
    std::vector<std::vector<Element>> var_cols;
    for (std::size_t v = 0; v < c.vars.size(); ++v) var_cols.push_back(as.column(v));
    PositionalColumns pc;
    const auto names = position_names(c.length());
    for (std::size_t i = 0; i < c.length(); ++i) {
        pc.lhs[names[i]] = var_cols[c.lhs[i]];
        pc.rhs[names[i]] = var_cols[c.rhs[i]];
    }
    return pc;
}

// First assignment where the identity fails, if any.
std::optional<std::size_t> first_failure(const FiniteAlgebra& a, const PositionalColumns& pc, std::size_t width,
                                         const Term& t)
{
    const auto l = eval_term_columns(a, t, pc.lhs, width);
    const auto r = eval_term_columns(a, t, pc.rhs, width);
    auto mm = std::mismatch(l.begin(), l.end(), r.begin());
    if (mm.first == l.end()) return std::nullopt;
    return static_cast<std::size_t>(mm.first - l.begin());
}

class Decider {
public:
    Decider(const FiniteAlgebra& a, const LoopCondition& c, const SatisfyOptions& opts)
        : a_(a), c_(c), opts_(opts), as_(a.size, c.vars.size(), opts.max_assignments)
    {
        // Distinct edges, each named after the first position using it.
        const auto names = position_names(c.length());
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (std::size_t i = 0; i < c.length(); ++i) {
            if (seen.emplace(c.lhs[i], c.rhs[i]).second) {
                edges_.emplace_back(c.lhs[i], c.rhs[i]);
                gen_names_.push_back(names[i]);
            }
        }
    }

    SatisfactionResult run()
    {
        res_.positions = position_names(c_.length());
        res_.stats.assignments = as_.count();
        if (as_.count() == 0) {
            res_.verdict = Verdict::undecided;
            res_.reason = "more than " + std::to_string(opts_.max_assignments) + " variable assignments";
            return res_;
        }
        pc_ = positional_columns(c_, as_);
        if (opts_.strategy == SatisfyStrategy::direct) {
            std::vector<std::size_t> all(as_.count());
            std::iota(all.begin(), all.end(), std::size_t{0});
            step(all, true);
            return res_;
        }
        // A single coordinate whose closure misses the diagonal already
        // refutes the condition: the closure projects onto it.
        for (std::size_t s = 0; s < as_.count(); ++s) {
            if (step({s}, false)) return res_;
        }
        std::vector<std::size_t> coords;
        while (true) {
            if (step(coords, true)) return res_;
            coords.push_back(*pending_);
        }
    }

private:
    // Runs one closure restricted to `coords`. Returns true once the verdict
    // is settled; otherwise a witness held on coords and pending_ names an
    // assignment where it fails (or, in a probe, the closure hit the diagonal).
    bool step(const std::vector<std::size_t>& coords, bool decisive)
    {
        std::map<std::vector<Element>, std::size_t> unique;
        std::vector<std::vector<Element>> columns;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        auto intern = [&](std::vector<Element> col) {
            auto [it, fresh] = unique.emplace(col, columns.size());
            if (fresh) columns.push_back(std::move(col));
            return it->second;
        };
        for (auto s : coords) {
            std::vector<Element> l, r;
            for (const auto& [u, v] : edges_) {
                l.push_back(as_.value(s, u));
                r.push_back(as_.value(s, v));
            }
            const auto il = intern(std::move(l));
            const auto ir = intern(std::move(r));
            if (il != ir) pairs.emplace_back(il, ir);
        }
        const auto width = columns.size();
        std::vector<std::vector<Element>> gens(edges_.size(), std::vector<Element>(width));
        for (std::size_t col = 0; col < width; ++col) {
            for (std::size_t j = 0; j < edges_.size(); ++j) gens[j][col] = columns[col][j];
        }
        auto diagonal = [&pairs](std::span<const Element> t) {
            return std::all_of(pairs.begin(), pairs.end(), [&](const auto& p) { return t[p.first] == t[p.second]; });
        };

        ClosureCaps caps = opts_.caps;
        if (res_.stats.applications >= caps.max_applications) return undecided("application cap reached");
        caps.max_applications -= res_.stats.applications;
        auto cr = subpower_closure(a_, width, gens, diagonal, caps, opts_.exec);
        res_.stats.applications += cr.applications;
        res_.stats.closures += 1;

        if (cr.status == ClosureStatus::cap_exceeded) {
            res_.stats.elements = cr.trace.size();
            res_.stats.coordinates = coords.size();
            return undecided("closure cap exceeded after " + std::to_string(cr.trace.size()) + " elements");
        }
        if (cr.status == ClosureStatus::closed) {
            res_.stats.elements = cr.trace.size();
            res_.stats.coordinates = coords.size();
            res_.verdict = Verdict::no;
            res_.reason = "closure of " + std::to_string(cr.trace.size()) + " pairs misses the diagonal";
            return true;
        }
        if (!decisive) return false;

        const auto term = extract_term(cr.trace, *cr.witness, gen_names_);
        pending_ = first_failure(a_, pc_, as_.count(), term);
        if (pending_) {
            if (coords.size() == as_.count()) throw VerificationFailed("diagonal witness fails its identity");
            return false;
        }
        res_.verdict = Verdict::yes;
        res_.witness = term;
        std::map<std::string, Term> bind;
        for (std::size_t i = 0; i < c_.length(); ++i) bind.emplace(res_.positions[i], Term::var(c_.vars[c_.lhs[i]]));
        res_.value = substitute(term, bind);
        res_.stats.elements = cr.trace.size();
        res_.stats.coordinates = coords.size();
        res_.replay_verified = replay_matches(a_, cr.trace, *cr.witness, term, gen_names_, gens) &&
                               diagonal(cr.trace.element(*cr.witness));
        res_.identity_verified = verify_witness(a_, c_, term);
        if (!res_.replay_verified || !res_.identity_verified) {
            throw VerificationFailed("witness failed re-verification");
        }
        return true;
    }

    bool undecided(std::string why)
    {
        res_.verdict = Verdict::undecided;
        res_.reason = std::move(why);
        return true;
    }

    const FiniteAlgebra& a_;
    const LoopCondition& c_;
    SatisfyOptions opts_;
    Assignments as_;
    PositionalColumns pc_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::string> gen_names_;
    std::optional<std::size_t> pending_;
    SatisfactionResult res_;
};

}  // namespace

SatisfactionResult satisfies(const FiniteAlgebra& a, const LoopCondition& c, const SatisfyOptions& opts)
{
    require_valid(a);
    validate_condition(c);
    return Decider(a, c, opts).run();
}

SatisfactionResult find_cyclic_term(const FiniteAlgebra& a, std::size_t n, const SatisfyOptions& opts)
{
    if (n < 1) throw InvalidParameter("cyclic arity must be positive");
    return satisfies(a, cyclic_condition(n), opts);
}

bool verify_witness(const FiniteAlgebra& a, const LoopCondition& c, const Term& positional)
{
    Assignments as(a.size, c.vars.size(), std::size_t{1} << 26);
    if (as.count() == 0) throw InvalidParameter("too many assignments to verify exhaustively");
    return !first_failure(a, positional_columns(c, as), as.count(), positional);
}

bool terms_equivalent(const FiniteAlgebra& a, const Term& s, const Term& t, const std::vector<std::string>& vars)
{
    Assignments as(a.size, vars.size(), std::size_t{1} << 26);
    if (as.count() == 0) throw InvalidParameter("too many assignments to compare exhaustively");
    std::map<std::string, std::vector<Element>> env;
    for (std::size_t v = 0; v < vars.size(); ++v) env[vars[v]] = as.column(v);
    return eval_term_columns(a, s, env, as.count()) == eval_term_columns(a, t, env, as.count());
}

// --- classification ----------------------------------------------------------------

std::uint64_t rad(std::uint64_t n)
{
    if (n == 0) throw InvalidParameter("rad of 0");
    std::uint64_t r = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        r *= p;
        while (n % p == 0) n /= p;
    }
    return n > 1 ? r * n : r;
}

std::string to_string(ConditionClass c)
{
    switch (c) {
        case ConditionClass::trivial: return "TRIVIAL";
        case ConditionClass::siggers: return "SIGGERS";
        case ConditionClass::cyclic: return "CYCLIC";
        case ConditionClass::unclassified: return "UNCLASSIFIED";
    }
    return "?";
}

Classification classify_condition(const LoopCondition& c)
{
    const auto g = condition_digraph(c);
    Classification k;
    k.trivial = is_trivial(c);
    k.strongly_connected = is_strongly_connected(g);
    k.weakly_connected = weak_components(g).size() == 1;
    k.algebraic_length = algebraic_length(g);
    const auto comps = strong_components(g);
    k.strong_component_count = comps.size();
    for (const auto& comp : comps) {
        if (comp.nontrivial) k.component_lengths.push_back(algebraic_length(induced_subgraph(g, comp.nodes)));
    }
    if (k.trivial) {
        k.cls = ConditionClass::trivial;
    } else if (k.strongly_connected && !k.algebraic_length.is_infinite()) {
        if (k.algebraic_length.value() == 1) {
            k.cls = ConditionClass::siggers;
        } else {
            k.cls = ConditionClass::cyclic;
            k.radical = rad(k.algebraic_length.value());
        }
    }
    return k;
}

std::optional<bool> class_implies(const Classification& stronger, const Classification& weaker)
{
    if (weaker.cls == ConditionClass::trivial) return true;
    if (stronger.cls == ConditionClass::unclassified || weaker.cls == ConditionClass::unclassified) {
        return std::nullopt;
    }
    if (stronger.cls == ConditionClass::trivial) return false;
    if (weaker.cls == ConditionClass::siggers) return true;
    if (stronger.cls == ConditionClass::siggers) return false;
    return stronger.radical % weaker.radical == 0;
}

// --- finite checks -------------------------------------------------------------------

bool median_order_check(int m)
{
    if (m < 2 || m > 30) throw InvalidParameter("median_order_check needs 2 <= m <= 30");
    std::vector<std::pair<int, int>> less;
    for (int p = 0; p < m; ++p) {
        for (int q = p + 1; q < m; ++q) less.emplace_back(p, q);
    }
    auto median = [](int x, int y, int z) { return std::max(std::min(x, y), std::min(std::max(x, y), z)); };
    for (const auto& a : less) {
        for (const auto& b : less) {
            for (const auto& c : less) {
                if (!(median(a.first, b.first, c.first) < median(a.second, b.second, c.second))) return false;
            }
        }
    }
    return true;
}

SimTransitivityReport sim_transitive_check(const std::vector<int>& cycle_lengths)
{
    std::vector<std::uint32_t> succ;
    for (int len : cycle_lengths) {
        if (len < 2) throw InvalidParameter("cycle lengths must be at least 2");
        const auto base = static_cast<std::uint32_t>(succ.size());
        for (int i = 0; i < len; ++i) succ.push_back(base + static_cast<std::uint32_t>((i + 1) % len));
    }
    const std::size_t n = succ.size();
    if (n == 0 || n > 8) throw InvalidParameter("universe must have 1..8 elements");
    SimTransitivityReport rep;
    rep.universe = n;
    std::size_t total = 1;
    for (int i = 0; i < 6; ++i) total *= n;
    rep.tuples = total;

    auto encode = [n](const std::array<std::uint32_t, 6>& t) {
        std::size_t idx = 0;
        for (auto x : t) idx = idx * n + x;
        return idx;
    };
    auto decode = [n](std::size_t idx) {
        std::array<std::uint32_t, 6> t{};
        for (int i = 5; i >= 0; --i) {
            t[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(idx % n);
            idx /= n;
        }
        return t;
    };

    std::vector<std::vector<std::size_t>> rel(total);
    for (std::size_t i = 0; i < total; ++i) rel[i].push_back(i);
    for (std::uint32_t x = 0; x < n; ++x) {
        for (std::uint32_t y = 0; y < n; ++y) {
            for (std::uint32_t z = 0; z < n; ++z) {
                const auto s = encode({x, x, y, y, z, z});
                const auto t = encode({y, z, z, x, x, y});
                rel[s].push_back(t);
                rel[t].push_back(s);
            }
        }
    }
    for (auto& r : rel) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        rep.related_pairs += r.size();
    }
    auto related = [&](std::size_t a, std::size_t b) { return std::binary_search(rel[a].begin(), rel[a].end(), b); };
    auto phi = [&](std::size_t idx) {
        auto t = decode(idx);
        for (auto& v : t) v = succ[v];
        return encode(t);
    };

    rep.transitive = true;
    rep.successor_compatible = true;
    rep.no_fixed_class = true;
    for (std::size_t a = 0; a < total; ++a) {
        for (auto b : rel[a]) {
            for (auto c : rel[b]) {
                if (!related(a, c)) rep.transitive = false;
            }
            if (!related(phi(a), phi(b))) rep.successor_compatible = false;
        }
        if (related(a, phi(a))) rep.no_fixed_class = false;
    }
    return rep;
}

}  // namespace looplab
