#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mcm::detail {

// Runs run_block(0..block_count-1) on up to `threads` workers, blocks handed
// out through an atomic counter. Callers are responsible for making block
// results order-independent (typically by storing them per block index and
// merging in block order afterwards). The first worker exception, if any, is
// rethrown on the calling thread.
inline void parallel_for_blocks(uint64_t block_count, int threads,
                                const std::function<void(uint64_t)>& run_block) {
  if (threads <= 1 || block_count <= 1) {
    for (uint64_t b = 0; b < block_count; ++b) run_block(b);
    return;
  }

  std::atomic<uint64_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      uint64_t b = next.fetch_add(1);
      if (b >= block_count) return;
      try {
        run_block(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  size_t n = std::min<uint64_t>(threads, block_count);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace mcm::detail
