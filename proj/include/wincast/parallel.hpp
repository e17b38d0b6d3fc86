#pragma once

#include <cstddef>
#include <functional>

namespace wincast {

/// Worker count: WINCAST_THREADS if set, else hardware concurrency.
std::size_t worker_count() noexcept;

/// Calls fn(i) for i in [0, n) across worker threads. Items are claimed
/// dynamically, so fn must only write to per-item state. The first
/// exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace wincast
