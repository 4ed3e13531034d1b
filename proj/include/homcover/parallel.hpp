#pragma once

// Static range partitioning over std::jthread. Callers make results independent
// of the split by keying all randomness on item indices.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace homcover {

/// Process-wide worker count; 0 restores the hardware default.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Calls body(begin, end, worker) on contiguous chunks of [0, count). The first
/// exception thrown by any chunk is rethrown after every worker has joined.
template <class Body>
void parallel_for(std::size_t count, Body&& body, std::size_t min_chunk = 1) {
    const std::size_t workers =
        std::min(thread_count(), std::max<std::size_t>(1, count / std::max<std::size_t>(1, min_chunk)));
    if (workers <= 1 || count == 0) {
        if (count > 0) body(std::size_t{0}, count, std::size_t{0});
        return;
    }
    std::exception_ptr failure;
    std::mutex mu;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = count * w / workers;
            const std::size_t end = count * (w + 1) / workers;
            pool.emplace_back([&, begin, end, w] {
                try {
                    body(begin, end, w);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace homcover
