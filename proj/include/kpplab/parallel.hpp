#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace kpplab {

// Data-parallel loop over [0, n). Iterations must not share mutable state.
// workers <= 1 runs inline; the CLI passes a worker-count hint through here.
inline void parallel_for(std::int64_t n, int workers,
                         const std::function<void(std::int64_t)>& body) {
    if (n <= 0) return;
    if (workers <= 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    const int nw = static_cast<int>(std::min<std::int64_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            for (std::int64_t i = w; i < n; i += nw) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace kpplab
