#ifndef PLUME_THREADING_HPP
#define PLUME_THREADING_HPP

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace plume {

/// Run fn(i) for i in [0, n) on up to `threads` workers with static
/// interleaved partitioning. Each index is processed exactly once and
/// results must be written to index-addressed slots, so the outcome is
/// independent of the thread count. The first exception is rethrown after
/// all workers join.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = std::min(threads, n);
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&](int w) {
        try {
            for (int i = w; i < n; i += workers) fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace plume

#endif
