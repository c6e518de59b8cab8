#include "dsdirac/parallel.hpp"

#include <cstdlib>
#include <thread>
#include <vector>

namespace dsdirac {

int thread_count() {
  static const int cached = [] {
    if (const char* env = std::getenv("DSDIRAC_THREADS")) {
      const int v = std::atoi(env);
      if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return cached;
}

void parallel_for(long count, const std::function<void(long)>& fn) {
  const int nthreads = thread_count();
  if (nthreads <= 1 || count < 2 * nthreads) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  const long block = (count + nthreads - 1) / nthreads;
  for (int w = 0; w < nthreads; ++w) {
    const long lo = w * block;
    const long hi = std::min(count, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace dsdirac
