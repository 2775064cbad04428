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

namespace cyclosc {

/// Worker count: CYCLOSC_THREADS when set to a positive integer, otherwise
/// the machine's hardware concurrency.
inline std::size_t worker_count() {
    if (const char *env = std::getenv("CYCLOSC_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception &) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Run fn(i) for i in [0, n). Work items are claimed dynamically; results
/// must be written to per-index slots so the outcome does not depend on
/// scheduling. The first exception thrown by fn is rethrown.
template <class Fn>
void parallel_for(std::size_t n, Fn &&fn, std::size_t workers = worker_count()) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto &t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace cyclosc
