#include "giantatom/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace giantatom {

std::size_t workerCount() {
    if (const char* env = std::getenv("GIANTATOM_THREADS")) {
        try {
            const long parsed = std::stol(env);
            if (parsed > 0) return std::size_t(parsed);
        } catch (...) {
            // Malformed value: fall through to the hardware default.
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallelFor(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(workerCount(), n);
    if (workers <= 1 || n < 4) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace giantatom
