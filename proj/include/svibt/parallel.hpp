#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace svibt {

/// Run fn(i) for i in [0, n) across up to `threads` workers (0 = hardware).
/// Each index writes only its own output slot, so results are identical for
/// any thread count. If callbacks throw, the exception from the lowest index
/// is rethrown after all workers finish.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  std::size_t workers = threads > 0 ? std::size_t(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  struct Failure {
    std::size_t index;
    std::exception_ptr error;
  };
  std::vector<Failure> failures(workers, Failure{0, nullptr});
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          if (!failures[w].error) failures[w] = {i, std::current_exception()};
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  const Failure* first = nullptr;
  for (const auto& f : failures) {
    if (f.error && (!first || f.index < first->index)) first = &f;
  }
  if (first) std::rethrow_exception(first->error);
}

}  // namespace svibt
