#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qgreedy {

// Number of worker threads used when a caller passes 0.
inline unsigned default_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1U : n;
}

// Splits [0, count) into fixed blocks of `block` items. The block layout
// depends only on (count, block), never on the thread count, and results are
// returned in block order, so any reduction done by the caller over the
// returned vector is reproducible bit for bit.
template <typename Result, typename Fn>
std::vector<Result> map_blocks(std::size_t count, std::size_t block, unsigned threads, Fn&& fn) {
    if (block == 0) block = 1;
    std::size_t nblocks = (count + block - 1) / block;
    std::vector<Result> out(nblocks);
    if (nblocks == 0) return out;
    if (threads == 0) threads = default_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, nblocks));

    auto run = [&](std::size_t b) {
        std::size_t begin = b * block;
        std::size_t end = std::min(count, begin + block);
        out[b] = fn(begin, end);
    };
    if (threads <= 1) {
        for (std::size_t b = 0; b < nblocks; ++b) run(b);
        return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t b = t; b < nblocks; b += threads) run(b);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace qgreedy
