#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bayesnr {

/// Worker cap: BAYESNR_THREADS when set (>=1), else hardware concurrency.
inline int max_threads() {
    if (const char* env = std::getenv("BAYESNR_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, n). Iterations must be independent; outputs
/// should be written to disjoint slots so the caller can reduce them in
/// deterministic index order afterwards.
inline void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = std::min(max_threads(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace bayesnr
