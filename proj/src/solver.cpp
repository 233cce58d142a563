#include "corekit/solver.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "corekit/accumulate.hpp"
#include "corekit/rng.hpp"

namespace corekit {

namespace {

// Inverse-CDF draw over a sequential prefix-sum array; zero-mass entries are
// never selected because their interval is empty.
std::size_t pick_from_prefix(const std::vector<double>& prefix, double u) {
    const double total = prefix.back();
    const double target = u * total;
    const auto it = std::upper_bound(prefix.begin(), prefix.end(), target);
    const std::size_t idx = it == prefix.end() ? prefix.size() - 1 : static_cast<std::size_t>(it - prefix.begin());
    return idx;
}

}  // namespace

CenterSet dsq_seed(PointsView s, std::size_t k, std::uint64_t seed, const Divergence& div) {
    if (s.n == 0) throw std::invalid_argument("dsq_seed: empty input");
    if (k == 0) throw std::invalid_argument("dsq_seed: k must be >= 1");
    const std::size_t d = s.d;

    std::vector<double> prefix(s.n);
    double running = 0.0;
    for (std::size_t i = 0; i < s.n; ++i) {
        running += s.weight(i);
        prefix[i] = running;
    }
    if (!(running > 0.0)) throw std::invalid_argument("dsq_seed: total weight must be positive");

    RandomStream pick(seed, stream_tag("dsq/pick"));
    Matrix centers(0, d);
    const std::size_t first = pick_from_prefix(prefix, pick.next_uniform());
    centers.push_row({s.data + first * d, d});

    // Running weighted distance to the nearest chosen center.
    std::vector<double> mass(s.n);
    auto refresh_mass = [&](const double* newest) {
        for_each_chunk(s.n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                const double cost = div({s.data + i * d, d}, {newest, d});
                const double scaled = s.weight(i) * cost;
                if (centers.rows() == 1 || scaled < mass[i]) mass[i] = scaled;
            }
        });
    };
    refresh_mass(centers.row(0).data());

    std::vector<double> weight_prefix = prefix;  // reused for the zero-residual fallback
    while (centers.rows() < k) {
        running = 0.0;
        for (std::size_t i = 0; i < s.n; ++i) {
            running += mass[i];
            prefix[i] = running;
        }
        const double u = pick.next_uniform();
        const std::size_t chosen =
            running > 0.0 ? pick_from_prefix(prefix, u) : pick_from_prefix(weight_prefix, u);
        centers.push_row({s.data + chosen * d, d});
        if (running > 0.0) refresh_mass(centers.row(centers.rows() - 1).data());
    }
    return CenterSet{std::move(centers)};
}

CenterSet lloyd_step(PointsView s, const CenterSet& q, const Divergence& div) {
    const std::size_t d = s.d;
    const std::size_t k = q.centers.rows();
    const std::vector<std::size_t> labels = assign_points(s, q, div);

    std::vector<NeumaierSum> sums(k * d);
    std::vector<NeumaierSum> totals(k);
    for (std::size_t i = 0; i < s.n; ++i) {
        const double w = s.weight(i);
        if (w == 0.0) continue;
        const std::size_t c = labels[i];
        const double* p = s.data + i * d;
        for (std::size_t j = 0; j < d; ++j) sums[c * d + j].add(w * p[j]);
        totals[c].add(w);
    }

    Matrix next(k, d, 0.0);
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < k; ++c) {
        const double total = totals[c].value();
        if (total > 0.0) {
            for (std::size_t j = 0; j < d; ++j) next(c, j) = sums[c * d + j].value() / total;
        } else {
            empty.push_back(c);
        }
    }

    if (!empty.empty()) {
        // Reseed each empty cluster to the point with the largest weighted
        // divergence to its assigned center; ties and repeats go to the
        // lowest index, and a point is consumed once.
        std::vector<double> contrib(s.n);
        for_each_chunk(s.n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                contrib[i] = s.weight(i) * div({s.data + i * d, d}, q.centers.row(labels[i]));
        });
        for (const std::size_t c : empty) {
            std::size_t far = 0;
            for (std::size_t i = 1; i < s.n; ++i)
                if (contrib[i] > contrib[far]) far = i;
            for (std::size_t j = 0; j < d; ++j) next(c, j) = s.data[far * d + j];
            contrib[far] = -1.0;
        }
    }
    return CenterSet{std::move(next)};
}

SolveResult solve_kmeans(PointsView s, const SolveConfig& cfg, const Divergence& div) {
    if (s.n == 0) throw std::invalid_argument("solve_kmeans: empty input");
    if (cfg.restarts == 0) throw std::invalid_argument("solve_kmeans: restarts must be >= 1");

    SolveResult best;
    bool have_best = false;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        const std::uint64_t restart_seed = substream_seed(cfg.seed, r);
        CenterSet centers = dsq_seed(s, cfg.k, restart_seed, div);
        double cost = quantization_error(s, centers, div);
        const double seed_cost = cost;
        std::size_t iters = 0;
        if (!cfg.seeding_only) {
            for (; iters < cfg.max_iters; ++iters) {
                CenterSet next = lloyd_step(s, centers, div);
                const double next_cost = quantization_error(s, next, div);
                if (next_cost > cost) {
                    // Lloyd is mathematically non-increasing; an increase within
                    // rounding slack (centroids of exact clusters can jitter by
                    // an ulp, visible when cost is ~0) means convergence: keep
                    // the better centers. Anything larger is a real defect.
                    if (next_cost - cost > 1e-9 * cost + 1e-15 * (1.0 + seed_cost))
                        throw std::logic_error("solve_kmeans: Lloyd step increased the cost");
                    break;
                }
                const double improvement = cost > 0.0 ? (cost - next_cost) / cost : 0.0;
                centers = std::move(next);
                cost = next_cost;
                if (improvement < cfg.rel_tol) {
                    ++iters;
                    break;
                }
            }
        }
        if (!have_best || cost < best.cost) {
            best.centers = std::move(centers);
            best.cost = cost;
            best.iters = iters;
            have_best = true;
        }
    }
    return best;
}

}  // namespace corekit
