#ifndef EXTLAB_PARALLEL_HPP
#define EXTLAB_PARALLEL_HPP

#include <cstddef>
#include <thread>
#include <vector>

namespace extlab {

inline unsigned hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Parallel map over [0, n) with a deterministic result: every work item is
// pure, results land in a pre-sized vector indexed by i, and any reduction
// the caller performs afterwards runs in index order.  This is the
// execution contract every scan in the library relies on.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, F&& f, unsigned max_threads = 0) {
    std::vector<T> out(n);
    if (n == 0) return out;
    unsigned nthreads = max_threads == 0 ? hardware_threads() : max_threads;
    if (nthreads > n) nthreads = static_cast<unsigned>(n);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += nthreads) out[i] = f(i);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

// Ordered sum of a parallel map; the reduction order is fixed (index 0..n-1)
// so results are bit-reproducible regardless of thread count.
template <typename T, typename F>
T parallel_sum(std::size_t n, F&& f, unsigned max_threads = 0) {
    std::vector<T> vals = parallel_map<T>(n, std::forward<F>(f), max_threads);
    T acc{};
    for (const T& v : vals) acc += v;
    return acc;
}

} // namespace extlab

#endif
