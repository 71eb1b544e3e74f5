#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace diffrf {

inline unsigned default_threads() {
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

// Static block split of [0, n) over `threads` workers. Each index is handled
// by exactly one worker and writes only its own output slots, so results do
// not depend on the thread count.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  if (threads > n) threads = static_cast<unsigned>(n);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::size_t chunk = n / threads, extra = n % threads, lo = 0;
  for (unsigned w = 0; w < threads; ++w) {
    std::size_t hi = lo + chunk + (w < extra ? 1 : 0);
    pool.emplace_back([lo, hi, &f] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
    lo = hi;
  }
  for (auto& t : pool) t.join();
}

}  // namespace diffrf
