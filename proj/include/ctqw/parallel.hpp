#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace ctqw {

/// Worker count: hardware concurrency, capped by CTQW_THREADS when set to a
/// positive integer.
inline std::size_t worker_count() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("CTQW_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap > 0) {
                n = std::min(n, static_cast<std::size_t>(cap));
            }
        } catch (const std::exception &) {
            // Malformed values leave the default in place.
        }
    }
    return n;
}

/// Runs fn(i) for i in [0, count). Callers write results into slot i, so
/// output is independent of scheduling. If any call throws, the exception
/// of the lowest failing index is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, Fn &&fn) {
    const std::size_t workers = std::min(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> error_index(workers, std::numeric_limits<std::size_t>::max());
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = next++; i < count && !failed; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[w] = std::current_exception();
                        error_index[w] = i;
                        failed = true;
                    }
                }
            });
        }
    }
    const auto first = std::min_element(error_index.begin(), error_index.end());
    if (*first != std::numeric_limits<std::size_t>::max()) {
        std::rethrow_exception(errors[static_cast<std::size_t>(first - error_index.begin())]);
    }
}

} // namespace ctqw
