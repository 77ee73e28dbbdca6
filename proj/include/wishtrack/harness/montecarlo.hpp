// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace wishtrack {

unsigned default_workers();

// Evaluates run(i) for i in [0, runs) on up to `workers` threads and feeds
// the results to fold(i, result) strictly in index order. Runs are processed
// in blocks to bound memory.
template <class RunFn, class FoldFn>
void monte_carlo(std::size_t runs, unsigned workers, RunFn&& run, FoldFn&& fold, std::size_t block = 256) {
    using Result = decltype(run(std::size_t{0}));
    workers = std::max(1u, workers);
    std::vector<std::optional<Result>> slots;
    for (std::size_t begin = 0; begin < runs; begin += block) {
        const std::size_t end = std::min(runs, begin + block);
        slots.assign(end - begin, std::nullopt);
        std::atomic<std::size_t> next{begin};
        std::exception_ptr error;
        std::mutex error_mutex;
        const auto work = [&] {
            for (std::size_t i = next++; i < end; i = next++) {
                try {
                    slots[i - begin].emplace(run(i));
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        };
        const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(workers, end - begin));
        if (n_threads <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(n_threads);
            for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }
        if (error) std::rethrow_exception(error);
        for (std::size_t i = begin; i < end; ++i) fold(i, std::move(*slots[i - begin]));
    }
}

}  // namespace wishtrack
