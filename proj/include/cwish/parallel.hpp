#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace cwish {

/// Worker count for trial loops. Results never depend on it.
struct ExecutionOptions {
  unsigned workers = 1;

  /// hardware_concurrency, capped by WISHART_THREADS when set to a positive
  /// integer.
  static ExecutionOptions from_environment();
};

/// Evaluates fn(i) for i in [0, count) on up to `workers` threads and returns
/// the results indexed by i. Callers reduce the returned vector in index
/// order, which makes summaries independent of the worker count.
template <class Fn>
auto run_trials(long count, unsigned workers, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, long>> {
  using Result = std::invoke_result_t<Fn&, long>;
  std::vector<Result> results(static_cast<std::size_t>(std::max(count, 0L)));
  const unsigned threads =
      std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max(count, 1L))));
  if (threads == 1) {
    for (long i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = fn(i);
    return results;
  }

  constexpr long kChunk = 64;
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (;;) {
        const long begin = next.fetch_add(kChunk);
        if (begin >= count) return;
        const long end = std::min(count, begin + kChunk);
        for (long i = begin; i < end; ++i) results[static_cast<std::size_t>(i)] = fn(i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(count);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace cwish
