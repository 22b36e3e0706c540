#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace wittcheck {

inline unsigned worker_count(unsigned requested) {
  if (requested) return requested;
  return std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
}

// Runs body(begin, end) over [0, n) split into contiguous chunks.
template <class Body>
void parallel_range(uint64_t n, unsigned workers, const Body& body) {
  workers = static_cast<unsigned>(std::min<uint64_t>(workers, std::max<uint64_t>(n / 4096, 1)));
  if (workers <= 1) {
    body(uint64_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const uint64_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const uint64_t b = w * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& t : pool) t.join();
}

// Lowers slot to v when v is smaller.
inline void keep_min(std::atomic<uint64_t>& slot, uint64_t v) {
  uint64_t cur = slot.load();
  while (v < cur && !slot.compare_exchange_weak(cur, v)) {
  }
}

}  // namespace wittcheck
