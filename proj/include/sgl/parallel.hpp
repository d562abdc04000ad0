#pragma once

#include <cstdint>
#include <functional>

namespace sgl {

// Worker cap shared by all parallel loops. Resolution order: set_max_threads()
// (CLI --threads), the SGL_THREADS environment variable, hardware concurrency.
int max_threads();
void set_max_threads(int n);

// Runs fn(begin, end) over a partition of [0, n). Chunks are claimed through an
// atomic counter; every loop in the library writes to disjoint output slots, so
// results do not depend on the number of workers or the claiming order.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn,
                  std::int64_t grain = 1);

// Convenience wrapper: fn(i) for each i in [0, n).
void parallel_for_each(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace sgl
