#pragma once

#include <cstddef>
#include <functional>

namespace haar {

/// Global worker budget for parallel sweeps (0 = hardware concurrency).
void set_default_threads(int n);
int default_threads();

/// Runs fn(i) for i in [0, count) on the worker budget. Results must be
/// written to preallocated slots so the reduction order stays fixed.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace haar
