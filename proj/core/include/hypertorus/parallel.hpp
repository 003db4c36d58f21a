#pragma once

#include <functional>

namespace hypertorus {

/// Process-wide worker pool. Work is split into fixed, thread-count-independent
/// blocks and every output location is owned by exactly one block, so results
/// are byte-identical for any pool size (including 1).
namespace pool {

/// Caps the number of workers. 0 or 1 means serial. Safe to call between ops.
void set_threads(int n);
int threads();

/// Runs fn(i) for i in [0, n). fn must only write to locations owned by i.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace pool

}  // namespace hypertorus
