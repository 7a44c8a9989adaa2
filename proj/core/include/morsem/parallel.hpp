#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace morsem {

/// Global worker cap shared by all grid sweeps. Results never depend on it:
/// every parallel_for writes into a pre-sized slot per index and reductions
/// run in index order afterwards.
inline std::atomic<int>& max_threads_slot() {
    static std::atomic<int> n{static_cast<int>(std::thread::hardware_concurrency())};
    return n;
}

inline void set_max_threads(int n) { max_threads_slot().store(n > 0 ? n : 1); }
inline int max_threads() { return max_threads_slot().load(); }

template <typename Fn>
void parallel_for(std::size_t count, Fn&& body) {
    int workers = max_threads();
    if (workers <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    workers = static_cast<int>(std::min<std::size_t>(workers, count));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex guard;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(guard);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace morsem
