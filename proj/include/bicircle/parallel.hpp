#pragma once

// Chunked parallel_for over an index range. Thread count is capped by the
// BICIRCLE_THREADS environment variable; results must be written to
// preallocated slots so runs are deterministic regardless of thread count.

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace bicircle {

inline int max_threads() {
  if (const char* env = std::getenv("BICIRCLE_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? (int)hw : 1;
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& body) {
  int threads = std::min<std::size_t>(max_threads(), n ? n : 1);
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace bicircle
