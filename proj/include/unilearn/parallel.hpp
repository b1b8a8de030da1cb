#pragma once

// Deterministic fan-out: work items are indexed, results are stored by
// index, and callers reduce them in index order. The number of workers
// therefore never changes a result.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace unilearn {

/// Worker count from UNILEARN_WORKERS, defaulting to the hardware concurrency.
int default_workers();

/// Overrides default_workers() for the calling process (0 restores the default).
void set_default_workers(int workers);

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t count, Fn&& fn, int workers = default_workers()) {
  std::vector<T> results(count);
  const std::size_t threads = std::min<std::size_t>(std::max(workers, 1), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace unilearn
