#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hscaler {

// Thread budget: hardware concurrency, capped by HSCALER_THREADS when set.
inline int max_threads() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("HSCALER_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return n;
}

// Static contiguous partition of [0, n); body(begin, end) per block. Results
// must not depend on the partition (disjoint writes, per-index work).
template <typename Body>
void parallel_for(std::int64_t n, Body&& body) {
    int threads = std::min<std::int64_t>(max_threads(), n);
    if (threads <= 1) {
        body(std::int64_t(0), n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::int64_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        std::int64_t lo = t * chunk;
        std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace hscaler
