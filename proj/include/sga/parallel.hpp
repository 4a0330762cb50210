#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sga {

namespace detail {
inline std::atomic<int>& thread_override() {
    static std::atomic<int> value{-1};
    return value;
}
}  // namespace detail

/// Overrides the worker count for the current process; negative restores the
/// SGA_THREADS / hardware default.
inline void set_thread_count(int n) { detail::thread_override().store(n); }

/// Number of workers: explicit override, else SGA_THREADS (0 = auto), else hardware.
inline unsigned thread_count() {
    int forced = detail::thread_override().load();
    if (forced > 0) return static_cast<unsigned>(forced);
    if (forced < 0) {
        if (const char* env = std::getenv("SGA_THREADS")) {
            int n = std::atoi(env);
            if (n > 0) return static_cast<unsigned>(n);
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Runs fn(begin, end) over a static partition of [0, n) into contiguous chunks,
/// one per worker. Chunks must be independent; results are then identical for
/// any worker count.
template <typename Fn>
void parallel_chunks(std::size_t n, Fn&& fn) {
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n == 0 ? 1 : n));
    if (workers <= 1) {
        if (n > 0) fn(std::size_t{0}, n);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    parallel_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) fn(i);
    });
}

}  // namespace sga
