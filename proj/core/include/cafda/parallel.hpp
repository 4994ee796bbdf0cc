#pragma once

#include <cstddef>
#include <functional>

namespace cafda {

/// Worker count from the CAFDA_WORKERS environment variable, falling back to
/// the hardware concurrency (at least 1).
std::size_t default_worker_count();

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks are
/// claimed dynamically; the first exception thrown is rethrown after all
/// workers have joined.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace cafda
