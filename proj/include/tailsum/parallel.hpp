#pragma once

#include <cstddef>
#include <functional>

namespace tailsum {

/// Worker count: TAILSUM_THREADS if set to a positive integer, else the
/// hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(i) for every i in [0, count). Work items are claimed dynamically, so
/// callers must write results into per-index slots to stay deterministic.
/// The first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tailsum
