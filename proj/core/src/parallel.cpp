#include "ctom/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace ctom {

int default_threads() {
  if (const char* env = std::getenv("CTOM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body,
                  int threads) {
  if (n <= 0) return;
  int workers = threads > 0 ? threads : default_threads();
  workers = static_cast<int>(std::min<std::int64_t>(workers, n));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    const std::int64_t lo = n * t / workers;
    const std::int64_t hi = n * (t + 1) / workers;
    pool.emplace_back([lo, hi, &body] {
      for (std::int64_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ctom
