#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace andersonspec {

/// Worker count resolution: explicit value if > 0, else ANDERSONSPEC_WORKERS,
/// else hardware concurrency.
int resolve_workers(int requested);

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Tasks are
/// indexed, so callers that write into slot i of a preallocated buffer get
/// results independent of scheduling. Exceptions are captured and the first
/// one rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, int workers);

/// Pairwise (cascade) summation. Depends only on element order, not on
/// execution order, and keeps the rounding error O(log n) ulps.
double pairwise_sum(std::span<const double> values);

}  // namespace andersonspec
