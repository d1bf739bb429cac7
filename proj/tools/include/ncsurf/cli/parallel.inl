#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace ncsurf::cli {

template <class T, class F>
std::vector<T> parallel_map(int count, int jobs, F task) {
  std::vector<T> out(static_cast<std::size_t>(std::max(count, 0)));
  jobs = std::clamp(jobs, 1, std::max(count, 1));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (int i; (i = next.fetch_add(1)) < count;) {
      try {
        out[static_cast<std::size_t>(i)] = task(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace ncsurf::cli
