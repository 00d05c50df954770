#pragma once

#include <cstddef>
#include <functional>

namespace pathforge {

/// Worker count for batch work: PATHFORGE_THREADS when set to a positive
/// integer, otherwise the hardware concurrency (at least 1).
unsigned batch_threads();

/// Runs body(i) for i in [0, count) on up to batch_threads() workers.
/// Work items must be independent; the first exception is rethrown after all
/// workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace pathforge
