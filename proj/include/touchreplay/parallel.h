#ifndef TOUCHREPLAY_PARALLEL_H_
#define TOUCHREPLAY_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace touchreplay {

// Applies |fn| to every input on at most |jobs| threads (0 = hardware
// concurrency). Results keep input order. The first exception, by input
// index, is rethrown after all workers finish.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& inputs, Fn fn, int jobs = 0) {
  using Out = decltype(fn(inputs.front()));
  std::vector<Out> results(inputs.size());
  std::vector<std::exception_ptr> errors(inputs.size());
  std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, inputs.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      try {
        results[i] = fn(inputs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace touchreplay

#endif  // TOUCHREPLAY_PARALLEL_H_
