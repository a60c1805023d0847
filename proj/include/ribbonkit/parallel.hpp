#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ribbonkit {

/// Worker count: RIBBONKIT_THREADS when set and positive, otherwise the
/// hardware concurrency (0 or unset means auto).
inline std::size_t thread_count() {
    std::size_t n = 0;
    if (const char* env = std::getenv("RIBBONKIT_THREADS")) {
        try {
            n = static_cast<std::size_t>(std::max(0L, std::stol(env)));
        } catch (...) {
            n = 0;
        }
    }
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

/// Calls body(i) for every i in [0, n). Each index is handled exactly once,
/// so callers that write results into slot i get schedule-independent output.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace ribbonkit
