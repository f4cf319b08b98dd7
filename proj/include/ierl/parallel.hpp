#pragma once

#include <cstddef>
#include <functional>

namespace ierl {

// Resolves a requested worker count: a positive request wins, otherwise the
// IERL_THREADS environment variable (0 = auto), otherwise hardware concurrency.
std::size_t resolve_threads(std::size_t requested = 0);

// Runs body(0..n-1) on up to `threads` workers. Each index is processed exactly
// once; callers write results into preallocated slots so output order never
// depends on scheduling. The exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

}  // namespace ierl
