#pragma once

#include <cstddef>
#include <functional>

namespace heavytail {

// Worker cap: HEAVYTAIL_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t thread_cap();

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// processed exactly once; callers write results into per-index slots so the
// outcome does not depend on scheduling. The first exception thrown by any
// worker is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace heavytail
