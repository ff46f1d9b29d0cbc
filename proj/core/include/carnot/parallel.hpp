#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace carnot {

// Work is split into fixed-size blocks so that per-block partial results do
// not depend on the thread count. Reductions over blocks must be combined in
// block order (see pairwise_sum) to keep results bit-identical.
inline constexpr std::size_t parallel_block_size = 4096;

inline std::size_t parallel_block_count(std::size_t n) {
    return (n + parallel_block_size - 1) / parallel_block_size;
}

// Runs body(begin, end) over [0, n) in blocks. threads <= 1 runs inline.
// Blocks are claimed with an atomic counter; body must only write state
// owned by its block.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t nblocks = parallel_block_count(n);
    auto run_block = [&](std::size_t b) {
        const std::size_t begin = b * parallel_block_size;
        const std::size_t end = std::min(n, begin + parallel_block_size);
        body(begin, end);
    };
    if (threads <= 1 || nblocks == 1) {
        for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= nblocks) return;
            try {
                run_block(b);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(nblocks);
                return;
            }
        }
    };
    const std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(threads), nblocks);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Pairwise summation; deterministic for a fixed input order.
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

// Deterministic parallel reduction: term(i) summed pairwise within fixed
// blocks, block partials summed pairwise in block order.
inline double parallel_sum(std::size_t n, int threads,
                           const std::function<double(std::size_t)>& term) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = parallel_block_count(n);
    std::vector<double> partial(nblocks, 0.0);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> buf(end - begin);
        for (std::size_t i = begin; i < end; ++i) buf[i - begin] = term(i);
        partial[begin / parallel_block_size] = pairwise_sum(buf);
    });
    return pairwise_sum(partial);
}

}  // namespace carnot
