#pragma once

#include <cstddef>
#include <functional>

namespace texturekit {

/// Worker cap: TEXTUREKIT_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Each index must write only to its own
/// output slot; results are then independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace texturekit
