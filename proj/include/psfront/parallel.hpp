#pragma once

#include <cstddef>
#include <functional>

namespace psfront {

// Number of worker threads: PSFRONT_THREADS if set, else hardware concurrency.
int thread_count();

// Static-chunked parallel map over [0, n). The body must write only to
// disjoint slots; exceptions are captured and rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace psfront
