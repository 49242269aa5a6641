#pragma once

#include <cstddef>
#include <functional>

namespace giantatom {

// Worker count for data-parallel loops: the GIANTATOM_THREADS
// environment variable when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t workerCount();

// Runs fn(i) for i in [0, n) across workerCount() threads in
// contiguous blocks. Falls back to a plain loop when n is small or
// only one worker is available. fn must be safe to call concurrently
// for distinct i.
void parallelFor(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace giantatom
