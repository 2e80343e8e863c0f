#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace pmt {

// Chunked parallel loop over [begin, end). Work items must be independent;
// results are written by index, so the outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(int begin, int end, Fn&& fn) {
    int n = end - begin;
    if (n <= 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    int workers = static_cast<int>(hw ? hw : 1);
    if (workers <= 1 || n < 4) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    workers = std::min(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([=, &fn]() {
            for (int i = begin + t; i < end; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace pmt
