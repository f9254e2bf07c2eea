#pragma once

#include <cstddef>
#include <functional>

namespace onslab {

/// Worker count for data-parallel sweeps. Honors ONS_LAB_THREADS when set to a
/// positive integer, otherwise uses the hardware concurrency.
[[nodiscard]] unsigned worker_count();

/// Runs body(i) for i in [0, count). Each index is processed exactly once and
/// results are expected to be written to per-index slots, so the outcome does
/// not depend on the number of workers. The first exception thrown by any
/// worker is rethrown on the calling thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace onslab
