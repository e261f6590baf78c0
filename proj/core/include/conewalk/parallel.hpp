#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace conewalk {

/// Runs body(begin, end, chunk_index) over [0, count) in fixed chunks.
/// Chunk boundaries do not depend on the thread count, so workers that
/// write per-chunk results indexed by chunk_index produce identical output
/// for any number of threads.
inline void parallel_chunks(long count, long chunk_size, int threads,
                            const std::function<void(long, long, long)>& body) {
    if (chunk_size < 1) chunk_size = 1;
    const long n_chunks = (count + chunk_size - 1) / chunk_size;
    if (threads <= 1 || n_chunks <= 1) {
        for (long c = 0; c < n_chunks; ++c) {
            body(c * chunk_size, std::min(count, (c + 1) * chunk_size), c);
        }
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        try {
            for (;;) {
                long c = next.fetch_add(1);
                if (c >= n_chunks) return;
                body(c * chunk_size, std::min(count, (c + 1) * chunk_size), c);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

/// Deterministic pairwise-ordered reduction: per-chunk sums are combined in
/// chunk order regardless of which thread produced them.
inline double sum_in_order(const std::vector<double>& chunk_sums) {
    double s = 0.0;
    for (double x : chunk_sums) s += x;
    return s;
}

}  // namespace conewalk
