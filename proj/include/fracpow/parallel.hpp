#pragma once

#include <cstddef>
#include <functional>

namespace fracpow {

// Worker count: hardware concurrency, capped by FRACPOW_THREADS when set.
std::size_t thread_count();

// Runs body(i) for i in [0, count). Work is split into contiguous blocks, so
// callers that write to slot i and reduce afterwards get results independent
// of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fracpow
