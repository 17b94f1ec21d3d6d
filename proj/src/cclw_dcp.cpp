#include <algorithm>
#include <limits>

#include "looplab/errors.hpp"
#include "looplab/families.hpp"

namespace looplab {

namespace {

// Rule 1: the letter is 0. Rule 2: the letter is even and no zero occurs
// within distance c - 1.
bool in_s(std::span<const int> w, int i, int c)
{
    if (w[i] == 0) return true;
    if (w[i] % 2 != 0) return false;
    if (i - c + 1 < 0 || i + c - 1 >= static_cast<int>(w.size())) {
        throw VerificationFailed("local rule queried a border position");
    }
    for (int j = i - c + 1; j <= i + c - 1; ++j) {
        if (w[j] == 0) return false;
    }
    return true;
}

}  // namespace

NodeId cclw_dcp_image(std::span<const int> window, int c)
{
    const int centre = 3 * c;
    if (static_cast<int>(window.size()) != 6 * c + 1) {
        throw InvalidParameter("window must have 6c+1 letters");
    }
    // Consecutive members of S are at most 2c apart, so both neighbours of a
    // non-member centre lie strictly within 2c.
    int left = -1, right = -1;
    for (int i = centre; i > centre - 2 * c; --i) {
        if (in_s(window, i, c)) { left = i; break; }
    }
    if (left == centre) return 0;
    for (int i = centre + 1; i < centre + 2 * c; ++i) {
        if (in_s(window, i, c)) { right = i; break; }
    }
    if (left < 0 || right < 0) {
        throw VerificationFailed("gap in S exceeds 2c");
    }
    const int t = centre - left;
    const int gap = right - left;
    if (gap % 2 == 0) return t % 2 == 0 ? 0 : 1;
    if (gap < c) throw VerificationFailed("odd gap shorter than c");
    // B_0 .. B_{c-1}, then A_0, A_1, ..., A_0.
    if (t < c) return dcp_b(2, static_cast<std::size_t>(c), static_cast<std::size_t>(t));
    return (t - c) % 2 == 0 ? 0 : 1;
}

std::vector<int> decode_walk(std::uint64_t index, int length, int c)
{
    std::vector<int> w(static_cast<std::size_t>(length));
    w[0] = static_cast<int>(index >> (length - 1));
    for (int i = 1; i < length; ++i) {
        const bool up = index >> (length - 1 - i) & 1;
        w[i] = up ? (w[i - 1] + 1) % c : (w[i - 1] + c - 1) % c;
    }
    return w;
}

CclwDcpReport verify_cclw_to_dcp(int c, Exec exec, const WindowMap& rule)
{
    if (c < 3 || c % 2 == 0) throw InvalidParameter("cclw-dcp needs odd c >= 3");
    if (6 * c + 2 > 56) throw InvalidParameter("walk space too large");
    const int k = 3 * c;
    const int length = 2 * k + 2;
    const auto total = static_cast<std::uint64_t>(c) << (length - 1);
    const auto target = dcp(2, static_cast<std::size_t>(c));
    const auto nodes = target.node_count();
    const WindowMap image = rule ? rule : WindowMap(cclw_dcp_image);

    CclwDcpReport rep;
    rep.c = c;
    rep.k = k;
    rep.walks_checked = total;
    rep.image_hit.assign(nodes, false);

    constexpr std::uint64_t kNoViolation = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t violations = 0;
    std::uint64_t first = kNoViolation;
    std::vector<char> hits(nodes, 0);

    auto check_block = [&](std::uint64_t begin, std::uint64_t end, std::uint64_t& viol, std::uint64_t& least,
                           std::vector<char>& hit) {
        std::vector<int> w;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            w = decode_walk(idx, length, c);
            const std::span<const int> all(w);
            bool ok = false;
            try {
                const auto a = image(all.first(length - 1), c);
                const auto b = image(all.last(length - 1), c);
                hit[a] = 1;
                hit[b] = 1;
                ok = target.has_edge(a, b);
            } catch (const VerificationFailed&) {
                // the rule left this window undefined
            }
            if (!ok) {
                ++viol;
                least = std::min(least, idx);
            }
        }
    };

    constexpr std::uint64_t kBlock = 1 << 12;
    const auto blocks = static_cast<std::int64_t>((total + kBlock - 1) / kBlock);
    if (exec == Exec::serial) {
        check_block(0, total, violations, first, hits);
    } else {
#if defined(LOOPLAB_HAVE_OPENMP)
#pragma omp parallel
        {
            std::uint64_t viol = 0, least = kNoViolation;
            std::vector<char> hit(nodes, 0);
#pragma omp for schedule(static) nowait
            for (std::int64_t b = 0; b < blocks; ++b) {
                const auto begin = static_cast<std::uint64_t>(b) * kBlock;
                check_block(begin, std::min(total, begin + kBlock), viol, least, hit);
            }
#pragma omp critical
            {
                violations += viol;
                first = std::min(first, least);
                for (std::size_t i = 0; i < nodes; ++i) hits[i] |= hit[i];
            }
        }
#else
        (void)blocks;
        check_block(0, total, violations, first, hits);
#endif
    }

    rep.violations = violations;
    if (first != kNoViolation) {
        rep.first_violation = first;
        rep.counterexample = decode_walk(first, length, c);
    }
    for (std::size_t i = 0; i < nodes; ++i) rep.image_hit[i] = hits[i] != 0;
    return rep;
}

}  // namespace looplab
