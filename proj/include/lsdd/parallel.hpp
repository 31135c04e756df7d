#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lsdd {

/// Runs body(i) for i in [0, count) on up to `threads` workers with a static
/// strided schedule. The first exception thrown by any body is rethrown.
template <class Body>
void parallel_for(std::ptrdiff_t count, unsigned threads, Body&& body) {
    const auto workers = static_cast<std::ptrdiff_t>(
        std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(threads), 1, std::max<std::ptrdiff_t>(count, 1)));
    if (workers <= 1) {
        for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (std::ptrdiff_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::ptrdiff_t i = w; i < count; i += workers) body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace lsdd
