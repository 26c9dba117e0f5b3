#pragma once

#include <cstddef>
#include <functional>

namespace qiso {

/// Worker count: QII_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Calls fn(i) for i in [0, n) across worker threads. Work is handed out in
/// contiguous blocks; fn must only write to state owned by index i. The
/// first exception thrown by any worker is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned workers = 0);

}  // namespace qiso
