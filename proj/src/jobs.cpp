#include "d4dr/jobs.hpp"

#include <atomic>
#include <exception>
#include <thread>

namespace d4dr {

void run_parallel(const std::vector<std::function<void()>>& tasks, int jobs) {
  if (jobs < 2 || tasks.size() < 2) {
    for (const auto& t : tasks) t();
    return;
  }
  size_t nthreads = std::min(size_t(jobs), tasks.size());
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(tasks.size());
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (size_t w = 0; w < nthreads; ++w) {
    pool.emplace_back([&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        try {
          tasks[i]();
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace d4dr
