#pragma once

#include <cstddef>
#include <functional>

namespace nemem {

/// Worker count: NEMEM_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(i) for i in [0, n), possibly concurrently.  Each index runs
/// exactly once; callers write results into per-index slots and reduce in
/// index order afterwards, so outputs never depend on scheduling.
/// threads == 0 means worker_count().  The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads = 0);

}  // namespace nemem
