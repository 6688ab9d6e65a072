#pragma once

#include <cstddef>
#include <functional>

namespace anttamp {

/// Worker count for parallel_for: the ANTTAMP_THREADS environment variable
/// when set (clamped to >= 1), otherwise the hardware concurrency.
int thread_count();

/// Run fn(i) for every i in [0, n). Calls are distributed over thread_count()
/// workers; each call must confine its writes to data keyed by its own index,
/// which makes results byte-identical for any pool size. The first exception
/// thrown by any call is rethrown on the caller's thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace anttamp
