#pragma once

// Block-parallel loops with results that do not depend on the thread count:
// work is cut into fixed blocks independent of the number of workers, and
// callers reduce per-block results in block order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hcomp {

/// 0 means std::thread::hardware_concurrency().
void set_thread_count(unsigned n) noexcept;
unsigned thread_count() noexcept;

/// Calls fn(block, begin, end) for every block of [0, n) of size `block_size`.
/// Blocks are distributed dynamically; exceptions are rethrown (first block
/// index wins).
template <class Fn>
void parallel_blocks(std::size_t n, std::size_t block_size, Fn&& fn) {
  if (n == 0) return;
  block_size = std::max<std::size_t>(block_size, 1);
  const std::size_t blocks = (n + block_size - 1) / block_size;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), blocks));
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b, b * block_size, std::min(n, (b + 1) * block_size));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_block = blocks;
  auto work = [&] {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        fn(b, b * block_size, std::min(n, (b + 1) * block_size));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (b < error_block) {
          error_block = b;
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t + 1 < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline std::size_t block_count(std::size_t n, std::size_t block_size) {
  return n == 0 ? 0 : (n + block_size - 1) / block_size;
}

}  // namespace hcomp
