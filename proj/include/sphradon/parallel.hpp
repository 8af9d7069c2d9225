#ifndef SPHRADON_PARALLEL_HPP
#define SPHRADON_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace sphradon {

inline unsigned default_thread_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1u : n;
}

/// Runs fn(i) for i in [0, count), split into contiguous chunks across
/// `threads` workers. Workers write to disjoint indices, so results are
/// identical regardless of scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace sphradon

#endif
