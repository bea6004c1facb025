#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace gdlab {

/// Runs fn(i) for i in [0, n) on `workers` threads. Work items must write
/// only to their own output slots; iteration order is unspecified, so
/// aggregation stays order-independent by construction.
inline void parallel_for(int64_t n, int workers, const std::function<void(int64_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            int64_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int count = std::min<int64_t>(workers, n);
    pool.reserve(static_cast<size_t>(count));
    for (int w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace gdlab
