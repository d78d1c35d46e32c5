#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace qkd::detail {

inline std::uint64_t effective_workers(std::uint64_t total, int requested) {
  std::uint64_t w;
  if (requested > 0) {
    w = static_cast<std::uint64_t>(requested);
  } else {
    unsigned hw = std::thread::hardware_concurrency();
    w = hw == 0 ? 1 : hw;
  }
  if (total > 0 && w > total) w = total;
  return w == 0 ? 1 : w;
}

// Splits [0, total) into `workers` contiguous chunks and calls
// fn(worker, begin, end) for each, spawning threads only when needed.
// Work units must derive their randomness from their absolute index so the
// outcome does not depend on the chunking.
template <typename Fn>
void run_sharded(std::uint64_t total, std::uint64_t workers, Fn&& fn) {
  if (workers <= 1) {
    fn(std::uint64_t{0}, std::uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&fn, w, total, workers] {
      fn(w, total * w / workers, total * (w + 1) / workers);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace qkd::detail
