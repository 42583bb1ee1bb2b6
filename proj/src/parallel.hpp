#ifndef FACET_SRC_PARALLEL_HPP
#define FACET_SRC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace facet::detail {

/// Calls body(i) for i in [0, count) on up to `jobs` threads. Each index
/// must write only to its own output slot. The first exception is rethrown
/// after all workers finish.
template <class Body>
void parallel_for(std::size_t count, std::size_t jobs, Body&& body) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) {
        workers.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace facet::detail

#endif
