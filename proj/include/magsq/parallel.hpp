#pragma once

#include <cstddef>
#include <functional>

namespace magsq {

/// Worker count: MAGSQ_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Run `task(i)` for i in [0, count) on at most worker_count() threads.
/// Tasks write their own output slot, so results merge in index order.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

}  // namespace magsq
