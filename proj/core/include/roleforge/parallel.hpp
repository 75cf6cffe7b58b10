#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace roleforge {

// Worker cap: hardware concurrency, lowered by ROLE_FORGE_THREADS when set to
// a positive integer.
std::size_t worker_count();

// Overrides worker_count() for the current process (0 restores the default).
void set_worker_count(std::size_t workers);

// Splits [0, n) into fixed-size chunks and runs fn(begin, end, chunk_index)
// for each. Chunk boundaries depend only on n and chunk_size, never on the
// worker count, so per-chunk partial results combined in chunk order give
// identical sums for any number of threads.
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t chunk_size, Fn&& fn) {
  if (n == 0) return;
  chunk_size = std::max<std::size_t>(chunk_size, 1);
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  const std::size_t workers = std::min(worker_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c * chunk_size, std::min(n, (c + 1) * chunk_size), c);
    return;
  }

  std::mutex mu;
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += workers) {
        try {
          fn(c * chunk_size, std::min(n, (c + 1) * chunk_size), c);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline constexpr std::size_t kDefaultChunk = 4096;

}  // namespace roleforge
