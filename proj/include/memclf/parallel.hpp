#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace memclf {

// Thread count resolution: explicit request > MEMCLF_THREADS > 1.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MEMCLF_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

// Static contiguous partition of [0, n) across threads. fn(i) must write
// only to slot i of any shared output, which makes results identical for
// every thread count.
template <typename F>
void parallel_for(int n, int threads, F&& fn) {
    threads = std::min(std::max(threads, 1), std::max(n, 1));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        const int begin = static_cast<int>(static_cast<long long>(n) * t / threads);
        const int end = static_cast<int>(static_cast<long long>(n) * (t + 1) / threads);
        pool.emplace_back([=, &fn] {
            for (int i = begin; i < end; ++i) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace memclf
