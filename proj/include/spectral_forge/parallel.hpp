#pragma once

// Order-preserving parallel map over an index range. Results land in their
// index slot, so any reduction done afterwards is deterministic.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace spectral_forge {

/// Worker count: SPECTRAL_FORGE_THREADS if set to a positive integer,
/// otherwise hardware concurrency (at least 1).
inline unsigned thread_count() {
    if (const char* env = std::getenv("SPECTRAL_FORGE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = fn(i) for i in [0, n). The first exception thrown by any task
/// (lowest index) is rethrown after all workers finish.
template <class F>
auto parallel_map(std::size_t n, F&& fn, unsigned threads = thread_count()) {
    using R = decltype(fn(std::size_t{}));
    std::vector<R> out(n);
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::mutex m;
    std::size_t failed_at = n;
    std::exception_ptr failure;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lk(m);
                if (i < failed_at) failed_at = i, failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace spectral_forge
