#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace corank {

inline unsigned default_workers() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

/// Runs fn(worker_id, begin, end) over a contiguous split of [0, n).
/// Each worker owns one range; merging partial results is the caller's job.
template <class Fn>
void parallel_ranges(std::uint64_t n, unsigned workers, Fn&& fn) {
    if (workers <= 1 || n < 2) {
        fn(0u, std::uint64_t(0), n);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::uint64_t chunk = n / workers, extra = n % workers, begin = 0;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t len = chunk + (w < extra ? 1 : 0);
        pool.emplace_back([&fn, w, begin, len] { fn(w, begin, begin + len); });
        begin += len;
    }
    for (auto& t : pool) t.join();
}

}  // namespace corank
