#ifndef HYPERELL_PARALLEL_HPP
#define HYPERELL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace hyperell {

/// Neumaier compensated accumulator.
struct CompensatedSum {
    double s = 0.0, c = 0.0;

    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

/// Runs per_chunk over fixed [begin, end) slices of [0, n_items) and combines
/// the results by a pairwise tree in chunk order.  Chunk boundaries depend
/// only on chunk_size, and each chunk is computed serially, so the result is
/// bit-identical for every thread count.
template <class R, class PerChunk, class Combine>
R parallel_reduce_chunks(uint64_t n_items, uint64_t chunk_size, unsigned threads,
                         PerChunk per_chunk, Combine combine, R identity) {
    if (chunk_size == 0) chunk_size = 1;
    const uint64_t n_chunks = (n_items + chunk_size - 1) / chunk_size;
    if (n_chunks == 0) return identity;

    std::vector<R> partial(n_chunks, identity);
    std::atomic<uint64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            uint64_t i = next.fetch_add(1);
            if (i >= n_chunks) return;
            uint64_t b = i * chunk_size;
            uint64_t e = std::min(n_items, b + chunk_size);
            partial[i] = per_chunk(b, e);
        }
    };

    if (threads <= 1 || n_chunks == 1) {
        worker();
    } else {
        unsigned nt = std::min<uint64_t>(threads, n_chunks);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // pairwise tree over chunk index
    std::vector<R> level = std::move(partial);
    while (level.size() > 1) {
        std::vector<R> up;
        up.reserve((level.size() + 1) / 2);
        for (size_t i = 0; i + 1 < level.size(); i += 2) up.push_back(combine(level[i], level[i + 1]));
        if (level.size() & 1) up.push_back(level.back());
        level = std::move(up);
    }
    return level[0];
}

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

} // namespace hyperell

#endif
