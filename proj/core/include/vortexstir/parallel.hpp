#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace vortexstir {

/// Worker count actually used: `requested` (0 = hardware concurrency)
/// capped by the VORTEX_STIR_THREADS environment variable.
std::size_t effective_threads(std::size_t requested = 0);

/// Run fn(i) for i in [0, n) on `threads` workers pulling indices from a
/// shared counter. Output written by index stays deterministic
/// regardless of the worker count. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = effective_threads(threads);
    if (n == 0) return;
    if (threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> bad{false};
    std::exception_ptr err;
    std::mutex err_mtx;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || bad.load(std::memory_order_relaxed)) return;
            try {
                fn(i);
            } catch (...) {
                bad.store(true, std::memory_order_relaxed);
                std::lock_guard<std::mutex> lk(err_mtx);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t nw = std::min(threads, n);
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

} // namespace vortexstir
