#pragma once

#include <cstddef>
#include <functional>

namespace echowall {

/// Worker cap: ECHOWALL_THREADS when set (>= 1), else hardware concurrency.
int max_threads();

/// Run fn(0) .. fn(n-1) across up to max_threads() workers. Callers must
/// write results into per-index slots; aggregation order is then
/// schedule-independent. Exceptions propagate to the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace echowall
