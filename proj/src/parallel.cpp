#include "dwsync/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace dwsync {

void parallel_for(int64_t n_items, int threads, const std::function<void(int64_t)>& fn) {
    if (n_items <= 0) return;
    int workers = std::max(1, threads);
    workers = static_cast<int>(std::min<int64_t>(workers, n_items));
    if (workers == 1) {
        for (int64_t i = 0; i < n_items; ++i) fn(i);
        return;
    }

    std::atomic<int64_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(n_items));
    auto work = [&]() {
        for (;;) {
            int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n_items) return;
            try {
                fn(i);
            } catch (...) {
                errors[static_cast<size_t>(i)] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace dwsync
