#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace owc {

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// Chunk boundaries depend only on (n, grain), never on the thread count, so
// callers that reduce per-chunk results in chunk order get identical output
// on every run and on every machine.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t grain, Fn&& fn) {
    if (n == 0) return;
    if (grain == 0) grain = 1;
    const std::size_t num_chunks = (n + grain - 1) / grain;

    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (workers > num_chunks) workers = static_cast<unsigned>(num_chunks);

    if (workers <= 1) {
        for (std::size_t c = 0; c < num_chunks; ++c)
            fn(c, c * grain, std::min(n, (c + 1) * grain));
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= num_chunks) return;
                fn(c, c * grain, std::min(n, (c + 1) * grain));
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace owc
