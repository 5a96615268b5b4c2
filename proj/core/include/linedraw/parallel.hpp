#pragma once

#include <cstddef>
#include <functional>

namespace linedraw {

/// Number of worker threads used by parallel loops. Defaults to the number of
/// logical cores. Results never depend on this value: every parallel loop in
/// the library writes to disjoint outputs or reduces in a fixed order.
int thread_count();
void set_thread_count(int threads);

/// Runs body(begin, end) over contiguous, statically partitioned chunks of
/// [0, n). Chunk boundaries depend only on n and the thread count.
void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    parallel_for_chunks(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) body(i);
    });
}

}  // namespace linedraw
