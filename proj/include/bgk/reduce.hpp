/// @file reduce.hpp
/// @brief Deterministic reductions and a minimal thread-parallel loop.
///
/// All reductions in this code base go through pairwise_sum so that results
/// are bit-identical across reruns and independent of the worker count.

#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bgk {

/// Fixed-tree pairwise summation of f(i) for i in [begin, end).
/// The split points depend only on the index range, never on thread count,
/// so the rounding pattern is reproducible.
template <typename F>
double pairwise_sum(std::size_t begin, std::size_t end, const F& f) {
    const std::size_t n = end - begin;
    if (n <= 32) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += f(i);
        return acc;
    }
    const std::size_t mid = begin + n / 2;
    return pairwise_sum(begin, mid, f) + pairwise_sum(mid, end, f);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::size_t{0}, v.size(), [&](std::size_t i) { return v[i]; });
}

/// Worker count: THREADS env var wins, else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("THREADS")) {
        const long n = std::atol(env);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? hc : 1;
}

/// Parallel loop over [0, n). Each worker owns a contiguous index block and
/// must only write to locations derived from its own indices.
template <typename F>
void parallel_for(std::size_t n, const F& body) {
    const unsigned nw = worker_count();
    if (nw <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const unsigned used = static_cast<unsigned>(std::min<std::size_t>(nw, n));
    std::vector<std::thread> pool;
    pool.reserve(used);
    const std::size_t chunk = (n + used - 1) / used;
    for (unsigned w = 0; w < used; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace bgk
