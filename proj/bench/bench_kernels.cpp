// Serial reference vs parallel kernels: timings and a result comparison.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>

#include "looplab/loopcond.hpp"

#if LOOPLAB_HAVE_OPENMP
#include <omp.h>
#endif

using namespace looplab;

namespace {

double seconds(const std::function<void()>& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same_trace(const SubpowerTrace& a, const SubpowerTrace& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto x = a.element(i), y = b.element(i);
        if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) return false;
    }
    return true;
}

void closure_row(const char* label, const FiniteAlgebra& a, std::size_t g)
{
    ClosureResult s, p;
    const double ts = seconds([&] { s = free_algebra(a, g, {}, Exec::serial); });
    const double tp = seconds([&] { p = free_algebra(a, g, {}, Exec::parallel); });
    std::printf("%-28s %10zu %10.3f %10.3f %8.2fx %s\n", label, s.trace.size(), ts, tp, ts / tp,
                same_trace(s.trace, p.trace) ? "same" : "DIFFERENT");
}

}  // namespace

int main()
{
#if LOOPLAB_HAVE_OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%-28s %10s %10s %10s %9s\n", "kernel", "size", "serial s", "parallel s", "speedup");

    closure_row("free affine(3), g=5", builtin_algebra("affine(3)"), 5);
    closure_row("free majority2, g=4", builtin_algebra("majority2"), 4);
    closure_row("free affine(5), g=4", builtin_algebra("affine(5)"), 4);

    for (int c : {3}) {
        CclwDcpReport s, p;
        const double ts = seconds([&] { s = verify_cclw_to_dcp(c, Exec::serial); });
        const double tp = seconds([&] { p = verify_cclw_to_dcp(c, Exec::parallel); });
        char label[64];
        std::snprintf(label, sizeof label, "cclw->dcp stream, c=%d", c);
        const bool same = s.walks_checked == p.walks_checked && s.violations == p.violations &&
                          s.image_hit == p.image_hit;
        std::printf("%-28s %10llu %10.3f %10.3f %8.2fx %s\n", label,
                    static_cast<unsigned long long>(s.walks_checked), ts, tp, ts / tp, same ? "same" : "DIFFERENT");
    }
    return 0;
}
