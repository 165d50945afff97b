#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace unidisc {

inline unsigned effective_threads(unsigned requested) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (requested == 0 || requested > hw) return hw;
  return requested;
}

/// Runs fn(i) for i in [0, n). Work items are pulled in chunks via an
/// atomic cursor; each item must write only to its own slot so results
/// are identical regardless of thread count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned max_threads, Fn&& fn) {
  unsigned nthreads = effective_threads(max_threads);
  if (n == 0) return;
  if (nthreads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::size_t chunk = std::max<std::size_t>(1, n / (nthreads * 8));
  auto worker = [&]() {
    while (true) {
      std::size_t begin = cursor.fetch_add(chunk);
      if (begin >= n) return;
      std::size_t end = std::min(n, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads - 1);
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace unidisc
