#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "heatctl/real.hpp"

namespace heatctl {

inline unsigned default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(i) for i in [0, count) on a small pool. Work items are independent
// pure computations (matrix entries, grid samples); each worker pins the
// caller's working precision, which is thread-local for mpreal.
template <class Fn>
void parallel_for(std::size_t count, const Fn& fn, unsigned threads = 0) {
    if (threads == 0) threads = default_thread_count();
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned digits = real_traits<mpreal>::current_digits();
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mtx;
    auto worker = [&]() {
        set_working_precision(digits);
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mtx);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace heatctl
