#include "sgl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sgl {

namespace {

int g_max_threads = 0;  // 0: not set explicitly

int resolve_threads() {
  if (g_max_threads > 0) return g_max_threads;
  if (const char* env = std::getenv("SGL_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int max_threads() { return resolve_threads(); }

void set_max_threads(int n) { g_max_threads = n; }

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn,
                  std::int64_t grain) {
  if (n <= 0) return;
  grain = std::max<std::int64_t>(grain, 1);
  int workers = std::min<std::int64_t>(resolve_threads(), (n + grain - 1) / grain);
  if (workers <= 1) {
    fn(0, n);
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto run = [&] {
    for (;;) {
      std::int64_t begin = next.fetch_add(grain);
      if (begin >= n) break;
      fn(begin, std::min(begin + grain, n));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int t = 1; t < workers; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

void parallel_for_each(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
  parallel_for(n, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) fn(i);
  });
}

}  // namespace sgl
