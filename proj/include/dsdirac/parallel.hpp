#pragma once

#include <functional>

namespace dsdirac {

// Thread cap from the DSDIRAC_THREADS environment variable (>= 1).
int thread_count();

// Runs fn(i) for i in [0, count). Work is split into contiguous blocks, one
// per worker; fn must write to disjoint locations only. Reductions are never
// parallelized, so results do not depend on the thread count.
void parallel_for(long count, const std::function<void(long)>& fn);

}  // namespace dsdirac
