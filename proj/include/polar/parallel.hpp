#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace polar {

// Worker cap from POLARLAB_THREADS, re-read on every call so callers can
// change it between runs. Affects scheduling only, never numeric results.
int max_threads();

// Maps chunk indices [0, n_chunks) to partials and folds them in index
// order, so the reduction is identical for every worker count.
template <class Partial, class Map, class Fold>
Partial chunked_reduce(std::int64_t n_chunks, Partial init, Map&& map, Fold&& fold) {
  if (n_chunks <= 0) return init;
  std::vector<Partial> parts(static_cast<std::size_t>(n_chunks));
  const std::int64_t cap = max_threads();
  const int workers = static_cast<int>(cap < n_chunks ? cap : n_chunks);
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n_chunks; ++i) parts[static_cast<std::size_t>(i)] = map(i);
  } else {
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    auto run = [&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n_chunks || failed.load(std::memory_order_relaxed)) return;
        try {
          parts[static_cast<std::size_t>(i)] = map(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
  }
  Partial acc = std::move(init);
  for (auto& p : parts) acc = fold(std::move(acc), std::move(p));
  return acc;
}

}  // namespace polar
