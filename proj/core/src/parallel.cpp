#include "roleforge/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <string_view>

namespace roleforge {

namespace {

std::atomic<std::size_t> override_workers{0};

std::size_t default_workers() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ROLE_FORGE_THREADS")) {
    const std::string_view s(env);
    std::size_t cap = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
    if (ec == std::errc{} && ptr == s.data() + s.size() && cap > 0) n = std::min(n, cap);
  }
  return n;
}

}  // namespace

std::size_t worker_count() {
  const std::size_t o = override_workers.load(std::memory_order_relaxed);
  if (o > 0) return o;
  static const std::size_t fallback = default_workers();
  return fallback;
}

void set_worker_count(std::size_t workers) { override_workers.store(workers, std::memory_order_relaxed); }

}  // namespace roleforge
