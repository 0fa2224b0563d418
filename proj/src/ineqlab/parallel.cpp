#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "thickflow/ineqlab.hpp"

namespace thickflow {

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (int k = 0; k < threads; ++k)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        if (failed) return;
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace thickflow
