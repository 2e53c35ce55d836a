#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace shull {

/// Worker cap: SHULL_THREADS when set, hardware concurrency otherwise.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("SHULL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Static block split of [0, n) over the thread budget. Each index is
/// processed exactly once; bodies must write only to their own slots.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::min<std::size_t>(thread_budget(), n == 0 ? 1 : n);
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace shull
