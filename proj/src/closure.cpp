#include <algorithm>
#include <string_view>

#include "looplab/algebra.hpp"
#include "looplab/errors.hpp"

#if LOOPLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace looplab {

std::string to_string(ClosureStatus s)
{
    switch (s) {
        case ClosureStatus::closed: return "closed";
        case ClosureStatus::witness_found: return "witness_found";
        case ClosureStatus::cap_exceeded: return "cap_exceeded";
    }
    return "?";
}

SubpowerTrace::SubpowerTrace(std::size_t width, std::vector<std::string> op_names, std::vector<int> arities)
    : width_(width), op_names_(std::move(op_names)), arities_(std::move(arities)), table_(64, 0)
{
}

std::span<const std::uint32_t> SubpowerTrace::arguments(std::size_t i) const
{
    const auto& p = prov_[i];
    if (p.op == kGenerator) return {};
    return {arg_pool_.data() + p.ref, static_cast<std::size_t>(arities_[static_cast<std::size_t>(p.op)])};
}

std::size_t SubpowerTrace::hash_of(std::span<const Element> t) const
{
    return std::hash<std::string_view>{}(
        std::string_view(reinterpret_cast<const char*>(t.data()), t.size()));
}

std::optional<std::size_t> SubpowerTrace::find(std::span<const Element> tuple) const
{
    if (tuple.size() != width_ || table_.empty()) return std::nullopt;
    const auto h = hash_of(tuple);
    const auto mask = table_.size() - 1;
    for (auto slot = h & mask;; slot = (slot + 1) & mask) {
        const auto e = table_[slot];
        if (e == 0) return std::nullopt;
        const auto idx = e - 1;
        if (hashes_[idx] == h && std::equal(tuple.begin(), tuple.end(), data_.begin() + idx * width_)) {
            return idx;
        }
    }
}

void SubpowerTrace::grow()
{
    std::vector<std::uint32_t> next(table_.size() * 2, 0);
    const auto mask = next.size() - 1;
    for (std::size_t i = 0; i < prov_.size(); ++i) {
        auto slot = hashes_[i] & mask;
        while (next[slot] != 0) slot = (slot + 1) & mask;
        next[slot] = static_cast<std::uint32_t>(i + 1);
    }
    table_.swap(next);
}

std::pair<std::size_t, bool> SubpowerTrace::intern(std::span<const Element> tuple, Provenance p,
                                                   std::span<const std::uint32_t> args)
{
    if (tuple.size() != width_) throw InvalidParameter("tuple width mismatch");
    if (table_.empty()) table_.assign(64, 0);
    const auto h = hash_of(tuple);
    const auto mask = table_.size() - 1;
    auto slot = h & mask;
    for (;; slot = (slot + 1) & mask) {
        const auto e = table_[slot];
        if (e == 0) break;
        const auto idx = e - 1;
        if (hashes_[idx] == h && std::equal(tuple.begin(), tuple.end(), data_.begin() + idx * width_)) {
            return {idx, false};
        }
    }
    const auto idx = prov_.size();
    data_.insert(data_.end(), tuple.begin(), tuple.end());
    hashes_.push_back(h);
    if (p.op != kGenerator) {
        p.ref = static_cast<std::uint32_t>(arg_pool_.size());
        arg_pool_.insert(arg_pool_.end(), args.begin(), args.end());
    }
    prov_.push_back(p);
    table_[slot] = static_cast<std::uint32_t>(idx + 1);
    if (2 * prov_.size() > table_.size()) grow();
    return {idx, true};
}

namespace {

constexpr std::size_t kBatchBytes = std::size_t{1} << 22;

class ClosureRun {
public:
    ClosureRun(const FiniteAlgebra& a, std::size_t width, const TuplePredicate& stop, const ClosureCaps& caps,
               Exec exec)
        : a_(a), n_(a.size), width_(width), stop_(stop), caps_(caps), exec_(exec)
    {
        std::vector<std::string> names;
        std::vector<int> arities;
        for (const auto& op : a.ops) {
            names.push_back(op.name);
            arities.push_back(op.arity);
        }
        res_.trace = SubpowerTrace(width, std::move(names), std::move(arities));
    }

    ClosureResult run(const std::vector<std::vector<Element>>& generators)
    {
        for (std::size_t g = 0; g < generators.size(); ++g) {
            if (generators[g].size() != width_) throw InvalidParameter("generator width mismatch");
            if (std::any_of(generators[g].begin(), generators[g].end(), [&](Element v) { return v >= n_; })) {
                throw InvalidParameter("generator value out of range");
            }
            SubpowerTrace::Provenance p{SubpowerTrace::kGenerator, static_cast<std::uint32_t>(g)};
            if (add(generators[g], p, {})) return finish();
        }
        std::vector<Element> tuple(width_);
        for (std::size_t o = 0; o < a_.ops.size(); ++o) {
            if (a_.ops[o].arity != 0) continue;
            std::fill(tuple.begin(), tuple.end(), a_.ops[o].table[0]);
            if (count_application() || add(tuple, {static_cast<int>(o), 0}, {})) return finish();
        }
        for (std::size_t j = 0; j < res_.trace.size(); ++j) {
            for (std::size_t o = 0; o < a_.ops.size(); ++o) {
                const auto k = static_cast<std::size_t>(a_.ops[o].arity);
                if (k == 0) continue;
                for (std::size_t p = 0; p < k; ++p) {
                    if (p > 0 && j == 0) break;
                    if (expand(o, k, j, p)) return finish();
                }
            }
        }
        return finish();
    }

private:
    ClosureResult finish() { return std::move(res_); }

    // True when the run must stop.
    bool count_application()
    {
        if (++res_.applications > caps_.max_applications) {
            res_.status = ClosureStatus::cap_exceeded;
            return true;
        }
        return false;
    }

    bool add(std::span<const Element> tuple, SubpowerTrace::Provenance p, std::span<const std::uint32_t> args)
    {
        auto [idx, fresh] = res_.trace.intern(tuple, p, args);
        if (!fresh) return false;
        if (stop_ && stop_(res_.trace.element(idx))) {
            res_.status = ClosureStatus::witness_found;
            res_.witness = idx;
            return true;
        }
        if (res_.trace.size() > caps_.max_elements) {
            res_.status = ClosureStatus::cap_exceeded;
            return true;
        }
        return false;
    }

    // All argument tuples for op o whose first occurrence of j is at p.
    bool expand(std::size_t o, std::size_t k, std::size_t j, std::size_t p)
    {
        std::vector<std::uint32_t> lo(k), hi(k), args(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (i < p) {
                lo[i] = 0;
                hi[i] = static_cast<std::uint32_t>(j - 1);
            } else if (i == p) {
                lo[i] = hi[i] = static_cast<std::uint32_t>(j);
            } else {
                lo[i] = 0;
                hi[i] = static_cast<std::uint32_t>(j);
            }
        }
        for (std::size_t i = 0; i + 1 < k; ++i) args[i] = lo[i];
        while (true) {
            if (exec_ == Exec::serial ? run_serial(o, k, args, lo[k - 1], hi[k - 1])
                                      : run_batched(o, k, args, lo[k - 1], hi[k - 1])) {
                return true;
            }
            // Odometer over the prefix positions 0..k-2.
            std::size_t pos = k - 1;
            while (pos > 0) {
                --pos;
                if (args[pos] < hi[pos]) {
                    ++args[pos];
                    break;
                }
                args[pos] = lo[pos];
                if (pos == 0) return false;
            }
            if (pos == 0 && k == 1) return false;
        }
    }

    bool run_serial(std::size_t o, std::size_t k, std::vector<std::uint32_t>& args, std::uint32_t lo,
                    std::uint32_t hi)
    {
        const auto& op = a_.ops[o];
        std::vector<Element> out(width_), xs(k);
        for (std::uint64_t last = lo; last <= hi; ++last) {
            args[k - 1] = static_cast<std::uint32_t>(last);
            for (std::size_t c = 0; c < width_; ++c) {
                for (std::size_t i = 0; i < k; ++i) xs[i] = res_.trace.element(args[i])[c];
                out[c] = op.apply(xs, n_);
            }
            if (count_application() || add(out, {static_cast<int>(o), 0}, args)) return true;
        }
        return false;
    }

    bool run_batched(std::size_t o, std::size_t k, std::vector<std::uint32_t>& args, std::uint32_t lo,
                     std::uint32_t hi)
    {
        const auto* table = a_.ops[o].table.data();
        acc_.assign(width_, 0);
        for (std::size_t i = 0; i + 1 < k; ++i) {
            const auto e = res_.trace.element(args[i]);
            for (std::size_t c = 0; c < width_; ++c) acc_[c] = acc_[c] * n_ + e[c];
        }
        for (std::size_t c = 0; c < width_; ++c) acc_[c] *= n_;

        const std::size_t per_batch = std::max<std::size_t>(1, kBatchBytes / std::max<std::size_t>(1, width_));
        for (std::uint64_t start = lo; start <= hi; start += per_batch) {
            const auto count = static_cast<std::size_t>(std::min<std::uint64_t>(per_batch, hi - start + 1));
            batch_.resize(count * width_);
            const Element* base = res_.trace.element(0).data();
            const auto w = width_;
            const auto* acc = acc_.data();
            auto* out = batch_.data();
            const auto first = static_cast<std::size_t>(start);
#if LOOPLAB_HAVE_OPENMP
#pragma omp parallel for schedule(static) if (count * w >= 65536)
#endif
            for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(count); ++t) {
                const Element* e = base + (first + static_cast<std::size_t>(t)) * w;
                Element* dst = out + static_cast<std::size_t>(t) * w;
                for (std::size_t c = 0; c < w; ++c) dst[c] = table[acc[c] + e[c]];
            }
            for (std::size_t t = 0; t < count; ++t) {
                args[k - 1] = static_cast<std::uint32_t>(start + t);
                std::span<const Element> tuple(batch_.data() + t * width_, width_);
                if (count_application() || add(tuple, {static_cast<int>(o), 0}, args)) return true;
            }
        }
        return false;
    }

    const FiniteAlgebra& a_;
    std::size_t n_;
    std::size_t width_;
    const TuplePredicate& stop_;
    ClosureCaps caps_;
    Exec exec_;
    ClosureResult res_;
    std::vector<std::size_t> acc_;
    std::vector<Element> batch_;
};

}  // namespace

ClosureResult subpower_closure(const FiniteAlgebra& a, std::size_t width,
                               const std::vector<std::vector<Element>>& generators, const TuplePredicate& stop,
                               const ClosureCaps& caps, Exec exec)
{
    require_valid(a);
    ClosureRun run(a, width, stop, caps, exec);
    return run.run(generators);
}

std::vector<std::vector<Element>> projection_generators(std::size_t n, std::size_t g)
{
    std::size_t width = 1;
    for (std::size_t i = 0; i < g; ++i) {
        width *= n;
        if (width > (std::size_t{1} << 24)) throw InvalidParameter("free algebra coordinates exceed 2^24");
    }
    std::vector<std::vector<Element>> gens(g, std::vector<Element>(width));
    for (std::size_t s = 0; s < width; ++s) {
        auto rest = s;
        for (std::size_t i = g; i-- > 0;) {
            gens[i][s] = static_cast<Element>(rest % n);
            rest /= n;
        }
    }
    return gens;
}

ClosureResult free_algebra(const FiniteAlgebra& a, std::size_t g, const ClosureCaps& caps, Exec exec)
{
    require_valid(a);
    const auto gens = projection_generators(a.size, g);
    const std::size_t width = gens.empty() ? 1 : gens.front().size();
    return subpower_closure(a, width, gens, {}, caps, exec);
}

Term extract_term(const SubpowerTrace& trace, std::size_t index, const std::vector<std::string>& generator_names)
{
    if (index >= trace.size()) throw InvalidParameter("element index out of range");
    // Arguments always precede the element they build, so one descending
    // sweep marks what is needed and one ascending sweep builds it.
    std::vector<char> needed(index + 1, 0);
    needed[index] = 1;
    for (std::size_t i = index + 1; i-- > 0;) {
        if (!needed[i]) continue;
        for (auto arg : trace.arguments(i)) needed[arg] = 1;
    }
    std::vector<std::optional<Term>> built(index + 1);
    for (std::size_t i = 0; i <= index; ++i) {
        if (!needed[i]) continue;
        const auto& p = trace.provenance(i);
        if (p.op == SubpowerTrace::kGenerator) {
            if (p.ref >= generator_names.size()) throw InvalidParameter("missing generator name");
            built[i] = Term::var(generator_names[p.ref]);
        } else {
            std::vector<Term> args;
            for (auto arg : trace.arguments(i)) args.push_back(*built[arg]);
            built[i] = Term::apply(trace.op_name(p.op), std::move(args));
        }
    }
    return *built[index];
}

bool replay_matches(const FiniteAlgebra& a, const SubpowerTrace& trace, std::size_t index, const Term& t,
                    const std::vector<std::string>& generator_names,
                    const std::vector<std::vector<Element>>& generators)
{
    if (generator_names.size() != generators.size()) throw InvalidParameter("generator name count mismatch");
    std::map<std::string, std::vector<Element>> env;
    for (std::size_t i = 0; i < generators.size(); ++i) env[generator_names[i]] = generators[i];
    const auto got = eval_term_columns(a, t, env, trace.width());
    const auto want = trace.element(index);
    return std::equal(got.begin(), got.end(), want.begin(), want.end());
}

}  // namespace looplab
