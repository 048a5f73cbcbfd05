#ifndef FBSDE_PARALLEL_HPP
#define FBSDE_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace fbsde {

// Worker count used by parallel_for. Outputs never depend on it: workers only
// fill disjoint, pre-indexed slots and all reductions run in index order.
inline std::atomic<unsigned>& thread_count_slot() {
  static std::atomic<unsigned> count{0};  // 0 = decide from hardware
  return count;
}

inline void set_thread_count(unsigned n) { thread_count_slot().store(n); }

inline unsigned effective_thread_count() {
  unsigned n = thread_count_slot().load();
  if (n == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n = hw == 0 ? 1 : hw;
  }
  return n;
}

/// Runs fn(i) for i in [0, n) across workers, partitioned by contiguous
/// index blocks. fn must write only to slot i of shared output.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(effective_thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi && !failed.load(); ++i) fn(i);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fbsde

#endif  // FBSDE_PARALLEL_HPP
