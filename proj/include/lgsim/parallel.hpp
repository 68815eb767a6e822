#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace lgsim {

/// Static block partition of [0, n) over `workers` threads. Tasks must write
/// to disjoint slots; there is no reduction, so results are independent of
/// the worker count.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    if (workers <= 1 || n == 1) {
        body(0, n);
        return;
    }
    const auto nw = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    const std::size_t chunk = (n + nw - 1) / nw;
    for (std::size_t t = 0; t < nw; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace lgsim
