#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace divkit {

// Process-wide worker count hint. 0 means "use hardware concurrency".
void set_thread_count(unsigned n);
unsigned thread_count();

// Static row partition: fn(begin, end) on contiguous slices. Each index is
// handled by exactly one worker and the per-index work is independent of the
// partition, so results are identical for any thread count.
template <typename Fn>
void parallel_for(size_t begin, size_t end, Fn&& fn) {
    size_t total = end > begin ? end - begin : 0;
    unsigned workers = thread_count();
    if (total == 0) return;
    if (workers <= 1 || total == 1) {
        fn(begin, end);
        return;
    }
    workers = static_cast<unsigned>(std::min<size_t>(workers, total));
    size_t chunk = (total + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::mutex err_mu;
    for (unsigned w = 0; w < workers; ++w) {
        size_t lo = begin + static_cast<size_t>(w) * chunk;
        size_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                fn(lo, hi);
            } catch (...) {
                if (!failed.exchange(true)) {
                    std::lock_guard<std::mutex> g(err_mu);
                    first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace divkit
