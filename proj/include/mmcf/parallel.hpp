#pragma once

#include <cstddef>
#include <functional>

namespace mmcf {

/// Worker count: MMCF_THREADS when set to a positive integer, else hardware concurrency.
int worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunks are disjoint, so
/// bodies that write only their own indices give results independent of the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace mmcf
