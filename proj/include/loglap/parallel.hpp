#ifndef LOGLAP_PARALLEL_HPP
#define LOGLAP_PARALLEL_HPP

// Index-ordered parallel evaluation.  Results land in the slot of their
// input index, so output never depends on scheduling or worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace loglap {

/// Worker cap from LOGLAP_THREADS; unset, empty or "auto" means the
/// hardware concurrency.  Invalid values throw.
inline unsigned thread_limit() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("LOGLAP_THREADS");
  if (env == nullptr || *env == '\0' || std::string(env) == "auto") return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 4096) throw std::invalid_argument("LOGLAP_THREADS must be a positive integer or 'auto'");
  return static_cast<unsigned>(v);
}

/// out[i] = f(i) for i < n using at most `workers` threads (0 means
/// thread_limit()).  The first exception by index order is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& f, unsigned workers = 0) {
  std::vector<R> out(n);
  if (n == 0) return out;
  if (workers == 0) workers = thread_limit();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace loglap

#endif  // LOGLAP_PARALLEL_HPP
