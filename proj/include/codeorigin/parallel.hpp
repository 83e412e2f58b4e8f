#pragma once

#include <cstddef>
#include <functional>

namespace codeorigin {

/// Worker cap: CODE_ORIGIN_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for every i in [0, n) on up to worker_count() threads.
/// Callers write results by index, so output never depends on scheduling.
/// The first exception thrown by any task is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace codeorigin
