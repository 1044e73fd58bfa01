#pragma once

#include <cstddef>
#include <functional>

namespace semibias {

// Runs body(i) for i in [0, count) on up to `threads` worker threads.
// Work is split into contiguous blocks; outputs must go to per-index slots,
// which keeps results independent of the schedule. The first exception (in
// index order) is rethrown after all workers join.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

// Thread-count resolution: explicit request > 0 wins, then the
// SEMIBIAS_THREADS environment variable, then hardware concurrency.
int resolve_threads(int requested);

}  // namespace semibias
