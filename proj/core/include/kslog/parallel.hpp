#pragma once

#include <cstddef>
#include <functional>

namespace kslog {

// Worker count: KSLOG_THREADS if set to a positive integer, else
// std::thread::hardware_concurrency() (at least 1).
std::size_t worker_count();

// Runs body(begin, end) over contiguous chunks of [0, n). Chunks run on up to
// worker_count() threads; the first exception thrown is rethrown.
// Calls made from inside a worker run serially on that worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace kslog
