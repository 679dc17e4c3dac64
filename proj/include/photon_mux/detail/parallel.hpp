#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace photon_mux::detail {

// Worker count: the requested value (0 = hardware concurrency), capped by
// the PHOTON_MUX_THREADS environment variable when set.
inline unsigned worker_count(unsigned requested = 0) {
  unsigned n = requested;
  if (n == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n = hw ? hw : 1;
  }
  if (const char* cap = std::getenv("PHOTON_MUX_THREADS")) {
    const long v = std::strtol(cap, nullptr, 10);
    if (v > 0 && static_cast<unsigned>(v) < n) n = static_cast<unsigned>(v);
  }
  return n == 0 ? 1 : n;
}

// Runs body(i) for i in [0, count) on up to `threads` workers. Work items
// must be independent; results keyed by index stay deterministic no matter
// how items are scheduled.
inline void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const unsigned workers = std::min<std::size_t>(worker_count(threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto run = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(first_error);
}

}  // namespace photon_mux::detail
