#pragma once
// Minimal element/row parallelism. The global thread count defaults to 1
// (deterministic); the CLI raises it via --threads or ANISO_AC_THREADS.

#include <cstddef>
#include <thread>
#include <vector>

namespace anisoac {

inline int& thread_count() {
    static int n = 1;
    return n;
}

inline void set_thread_count(int n) { thread_count() = n < 1 ? 1 : n; }

template <class F>
inline void parallel_for(std::size_t count, F&& body) {
    const int nt = thread_count();
    if (nt <= 1 || count < 2048) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(nt);
    const std::size_t chunk = (count + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&body, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace anisoac
