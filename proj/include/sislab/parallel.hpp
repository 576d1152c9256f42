#pragma once

#include <cstddef>
#include <functional>

namespace sislab {

/// Number of worker threads used by per-fiber loops. 0 selects the hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(i) for i in [0, count). Work is split into contiguous static chunks, so any
/// body that only writes slot i produces results independent of the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace sislab
