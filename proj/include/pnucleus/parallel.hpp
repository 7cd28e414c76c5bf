#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace pnucleus {

inline int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Static range split; fn(worker, begin, end) runs on each chunk. Results
// must be written to disjoint slots (or reduced order-insensitively) so the
// output cannot depend on the worker count.
template <typename Fn>
void parallel_for_workers(std::size_t n, int threads, Fn&& fn) {
  if (n == 0) return;
  if (threads < 1) threads = 1;
  std::size_t workers = std::min<std::size_t>(threads, n);
  std::size_t chunk = (n + workers - 1) / workers;
  if (workers <= 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  parallel_for_workers(n, threads,
                       [&fn](std::size_t, std::size_t begin, std::size_t end) {
                         fn(begin, end);
                       });
}

}  // namespace pnucleus
