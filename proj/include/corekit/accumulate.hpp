#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace corekit {

// Global worker-count cap. 0 or 1 means sequential. The CLI sets this from
// --threads / COREKIT_THREADS; results never depend on it (see block_sum).
int max_threads();
void set_max_threads(int n);

// Neumaier (Kahan-Babuska) compensated accumulator.
struct NeumaierSum {
    double s = 0.0, c = 0.0;

    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }

    double value() const { return s + c; }
};

namespace detail {

// All point-indexed reductions run over fixed-size blocks so the reduction
// tree is a function of n alone, never of the worker count. Partial results
// land in a per-block slot; blocks may be filled concurrently.
constexpr std::size_t kBlockSize = 2048;

std::size_t block_count(std::size_t n);

// Runs fn(block_index, lo, hi) for each block [lo, hi) of 0..n, possibly on
// several threads. fn must only write state owned by its block index.
void for_each_block(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Pairwise reduction of per-block partials in block order.
double pairwise_total(std::span<const double> partials);

}  // namespace detail

// Sum of term(i) for i in 0..n, compensated within blocks, pairwise across
// blocks; bit-identical for any worker count.
template <typename Term>
double block_sum(std::size_t n, Term&& term) {
    const std::size_t nb = detail::block_count(n);
    std::vector<double> partial(nb, 0.0);
    detail::for_each_block(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        NeumaierSum acc;
        for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
        partial[b] = acc.value();
    });
    return detail::pairwise_total(partial);
}

// Parallel loop without a reduction: fn(begin, end) over fixed-size chunks.
// fn must only write state derived from the index range it was handed.
inline void for_each_chunk(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    detail::for_each_block(n, [&](std::size_t, std::size_t lo, std::size_t hi) { fn(lo, hi); });
}

// Coordinate-wise analogue: term(i, acc) adds point i's contribution into the
// block's d compensated slots; partials are combined pairwise per coordinate.
template <typename Term>
std::vector<double> block_vector_sum(std::size_t n, std::size_t d, Term&& term) {
    const std::size_t nb = detail::block_count(n);
    std::vector<NeumaierSum> partial(nb * d);
    detail::for_each_block(n, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        NeumaierSum* acc = partial.data() + b * d;
        for (std::size_t i = lo; i < hi; ++i) term(i, acc);
    });
    std::vector<double> out(d, 0.0);
    std::vector<double> col(nb);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t b = 0; b < nb; ++b) col[b] = partial[b * d + j].value();
        out[j] = detail::pairwise_total(col);
    }
    return out;
}

}  // namespace corekit
