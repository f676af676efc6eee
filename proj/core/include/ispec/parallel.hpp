#pragma once

#include <cstddef>
#include <functional>

namespace ispec {

// Resolves a requested thread count: positive values win, otherwise the
// ISPEC_THREADS environment variable, otherwise 1.
int resolve_threads(int requested = 0);

// Runs body(k) for k in [0, count). Each index is visited exactly once; the
// body must only write to storage owned by its index.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace ispec
