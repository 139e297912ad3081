#pragma once

#include <cstddef>
#include <functional>

namespace sppal {

// Worker count used by parallel_for. Defaults to the SPPAL_THREADS environment
// variable when set, otherwise 1.
void set_thread_count(int n);
int thread_count();

// Calls fn(i) for i in [0, n). Each index is visited exactly once; callers write
// results by index so output does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sppal
