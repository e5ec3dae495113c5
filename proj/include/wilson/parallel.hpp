#pragma once

#include <cstddef>
#include <functional>

namespace wilson {

/// Worker count: WILSON_THREADS when set to a positive integer, otherwise
/// std::thread::hardware_concurrency() (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. Each index is
/// claimed exactly once; callers write results into per-index slots, so the
/// output does not depend on scheduling. The first exception thrown by any
/// body is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace wilson
