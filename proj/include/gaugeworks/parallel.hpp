#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gaugeworks {

// GAUGEWORKS_THREADS limits worker threads; 0 or unset means auto.
inline unsigned thread_count() {
    if (const char* env = std::getenv("GAUGEWORKS_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Each index writes only its own slot in caller-owned storage, so the result
// is identical no matter how the range is carved up.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    const unsigned workers = thread_count();
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        if (lo >= n) break;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace gaugeworks
