#pragma once

#include <cstddef>
#include <functional>

namespace far {

/// Worker count used by the per-line / per-channel loops. Defaults to 1.
/// Results never depend on it: every parallel loop writes disjoint outputs.
void set_num_threads(std::size_t n);
std::size_t num_threads();

/// Runs body(i) for i in [0, count), split into contiguous chunks across
/// num_threads() workers. Exceptions from any chunk are rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

} // namespace far
