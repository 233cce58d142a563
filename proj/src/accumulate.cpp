#include "corekit/accumulate.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace corekit {

namespace {
std::atomic<int> g_max_threads{1};
}

int max_threads() { return g_max_threads.load(std::memory_order_relaxed); }

void set_max_threads(int n) { g_max_threads.store(n < 1 ? 1 : n, std::memory_order_relaxed); }

namespace detail {

std::size_t block_count(std::size_t n) {
    return n == 0 ? 0 : (n + kBlockSize - 1) / kBlockSize;
}

void for_each_block(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    const std::size_t nb = block_count(n);
    if (nb == 0) return;

    auto run_block = [&](std::size_t b) {
        const std::size_t lo = b * kBlockSize;
        const std::size_t hi = std::min(n, lo + kBlockSize);
        fn(b, lo, hi);
    };

    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), nb);
    if (workers <= 1) {
        for (std::size_t b = 0; b < nb; ++b) run_block(b);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
                if (b >= nb) return;
                run_block(b);
            }
        });
    }
    for (auto& th : pool) th.join();
}

double pairwise_total(std::span<const double> partials) {
    if (partials.empty()) return 0.0;
    if (partials.size() == 1) return partials[0];
    const std::size_t half = partials.size() / 2;
    return pairwise_total(partials.first(half)) + pairwise_total(partials.subspan(half));
}

}  // namespace detail

}  // namespace corekit
