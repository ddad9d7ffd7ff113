#pragma once

#include <cstddef>
#include <functional>

namespace multiassoc {

/// Worker count: hardware concurrency, capped by MULTIASSOC_THREADS when set.
/// Always at least 1.
size_t worker_count();

/// Runs fn(0) .. fn(n-1) across worker threads in contiguous blocks.
/// Callers write to index-addressed slots, so results do not depend on the
/// schedule. The first exception thrown by any worker is rethrown.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace multiassoc
