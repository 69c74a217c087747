#pragma once

#include <cstdint>
#include <functional>

namespace ctom {

/// Worker count used when a caller passes threads <= 0. Honors the
/// CTOM_THREADS environment variable, else hardware concurrency.
int default_threads();

/// Runs body(i) for i in [0, n). Work is split into contiguous blocks, one
/// per worker; outputs must be written to disjoint slots so the result is
/// independent of the thread count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body,
                  int threads = 0);

}  // namespace ctom
