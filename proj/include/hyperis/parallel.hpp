#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace hyperis {

/// Thread count from HYPERIS_THREADS, else 1.
inline unsigned default_threads() {
  if (const char* env = std::getenv("HYPERIS_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers with dynamic scheduling.
/// Results must be written to per-index slots; the first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::atomic_flag error_set = ATOMIC_FLAG_INIT;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        if (!error_set.test_and_set()) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned w = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(w);
  for (unsigned t = 0; t < w; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hyperis
