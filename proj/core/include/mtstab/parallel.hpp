#pragma once

#include <cstddef>
#include <functional>

namespace mtstab {

/// Process-wide worker count for grid sweeps and contour evaluations.
/// 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mtstab
