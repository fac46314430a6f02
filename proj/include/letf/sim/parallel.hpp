#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace letf::sim {

/// Parallel execution knobs. Results never depend on them: every path draws
/// from its own substream and is written to its own slot.
struct SimOptions {
    std::size_t threads = 0;    ///< 0 = hardware concurrency
    std::size_t chunk = 512;    ///< paths per work item
    bool clamp_tracking = false;  ///< truncate tracking draws at +-6 tau
};

/// Calls fn(first, count) for consecutive chunks covering [0, n). Chunks are
/// claimed from an atomic counter; the first exception thrown by any worker
/// is rethrown on the calling thread.
template <class Fn>
void for_each_chunk(std::size_t n, const SimOptions& opts, Fn&& fn) {
    const std::size_t chunk = std::max<std::size_t>(1, opts.chunk);
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    std::size_t threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n_chunks));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                const std::size_t first = c * chunk;
                fn(first, std::min(chunk, n - first));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_chunks);
                return;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace letf::sim
