#pragma once

#include <cstddef>
#include <functional>

namespace zhom {

/// Worker count: ZHOM_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs fn(i) for i in [0, n), spreading indices over up to thread_count()
/// threads. Results must be written to disjoint, preallocated slots so that
/// output never depends on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

} // namespace zhom
