#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace dphase {

// Process-wide worker count used by parallel_for. 1 keeps everything serial.
int thread_count();
void set_thread_count(int n);

// Chunked parallel map over [0, n). Chunk boundaries depend only on n, and
// each index writes its own output slot, so results are identical for any
// worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const int workers = thread_count();
    if (workers <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const std::size_t chunk = (n + std::size_t(workers) - 1) / std::size_t(workers);
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = std::size_t(w) * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace dphase
