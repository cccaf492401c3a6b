#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace quickim {

/// Number of workers to use when the caller passes 0.
inline unsigned default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Calls fn(worker, begin, end) on `threads` contiguous chunks of [0, count) and joins.
/// Chunk boundaries depend only on (count, threads).
template <class Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = default_thread_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        fn(0u, std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        const std::size_t begin = std::min(count, w * chunk);
        const std::size_t end = std::min(count, begin + chunk);
        workers.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
    }
    for (auto& t : workers) t.join();
}

}  // namespace quickim
