#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace nlskdv {

/// Result slot of one job: a value or the exception it threw.
template <class R>
struct Outcome {
  std::optional<R> value;
  std::exception_ptr error;

  bool ok() const noexcept { return value.has_value(); }
  const R& get() const {
    if (error) std::rethrow_exception(error);
    return *value;
  }
};

/// Run fn(0) ... fn(count-1) on at most `workers` threads. Jobs share nothing,
/// results land in index order, and an exception stays with its own slot.
template <class R>
std::vector<Outcome<R>> parallel_map(std::size_t count, int workers,
                                     const std::function<R(std::size_t)>& fn) {
  std::vector<Outcome<R>> out(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i].value.emplace(fn(i));
      } catch (...) {
        out[i].error = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(workers > 0 ? workers : 1));
  if (n_threads <= 1) {
    drain();
    return out;
  }
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(drain);
  for (auto& th : threads) th.join();
  return out;
}

}  // namespace nlskdv
