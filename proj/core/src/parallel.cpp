#include "linedraw/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace linedraw {

namespace {

std::atomic<int>& thread_setting() {
    static std::atomic<int> threads{std::max(1, static_cast<int>(std::thread::hardware_concurrency()))};
    return threads;
}

// Nested loops run serially on the calling worker.
thread_local bool inside_parallel = false;

}  // namespace

int thread_count() { return thread_setting().load(); }

void set_thread_count(int threads) { thread_setting().store(std::max(1, threads)); }

void parallel_for_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (workers <= 1 || inside_parallel) {
        body(0, n);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    const std::size_t chunk = (n + workers - 1) / workers;

    auto run = [&](std::size_t begin, std::size_t end) {
        const bool was_inside = inside_parallel;
        inside_parallel = true;
        try {
            body(begin, end);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
        inside_parallel = was_inside;
    };
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(run, begin, end);
    }
    run(0, std::min(n, chunk));
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace linedraw
