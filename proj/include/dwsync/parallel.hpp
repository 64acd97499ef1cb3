#pragma once

#include <cstdint>
#include <functional>

namespace dwsync {

// Runs fn(i) for i in [0, n_items). Workers claim indices from a shared
// counter, so each index runs exactly once; fn must write results into
// per-index slots and callers reduce in index order afterwards, which keeps
// every output independent of scheduling and thread count. If several items
// throw, the exception from the smallest index is rethrown.
void parallel_for(int64_t n_items, int threads, const std::function<void(int64_t)>& fn);

}  // namespace dwsync
