#include "corekit/core.hpp"

#include <limits>
#include <stdexcept>

#include "corekit/accumulate.hpp"

namespace corekit {

std::vector<double> dataset_mean(PointsView s) {
    if (s.n == 0) throw std::invalid_argument("dataset_mean: empty input");
    const std::size_t d = s.d;
    std::vector<double> sums = block_vector_sum(s.n, d, [&](std::size_t i, NeumaierSum* acc) {
        const double w = s.weight(i);
        const double* p = s.data + i * d;
        for (std::size_t j = 0; j < d; ++j) acc[j].add(w * p[j]);
    });
    double total = s.weights == nullptr
                       ? static_cast<double>(s.n)
                       : block_sum(s.n, [&](std::size_t i) { return s.weight(i); });
    if (total <= 0.0) throw std::invalid_argument("dataset_mean: total weight must be positive");
    for (double& v : sums) v /= total;
    return sums;
}

double nearest_center_cost(std::span<const double> x, const CenterSet& q, const Divergence& div) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < q.centers.rows(); ++c) {
        const double cost = div(x, q.centers.row(c));
        if (cost < best) best = cost;
    }
    return best;
}

double quantization_error(PointsView s, const CenterSet& q, const Divergence& div) {
    if (q.centers.rows() == 0) throw std::invalid_argument("quantization_error: empty center set");
    if (s.d != q.centers.cols())
        throw std::invalid_argument("quantization_error: dimension mismatch");
    const std::size_t d = s.d;
    return block_sum(s.n, [&](std::size_t i) {
        const double w = s.weight(i);
        if (w == 0.0) return 0.0;
        return w * nearest_center_cost({s.data + i * d, d}, q, div);
    });
}

double central_cost(PointsView s, std::span<const double> mean, const Divergence& div) {
    if (mean.size() != s.d) throw std::invalid_argument("central_cost: dimension mismatch");
    const std::size_t d = s.d;
    return block_sum(s.n, [&](std::size_t i) {
        return s.weight(i) * div.companion_distance({s.data + i * d, d}, mean);
    });
}

double central_cost(PointsView s, const Divergence& div) {
    const std::vector<double> mean = dataset_mean(s);
    return central_cost(s, mean, div);
}

std::vector<std::size_t> assign_points(PointsView s, const CenterSet& q, const Divergence& div) {
    if (q.centers.rows() == 0) throw std::invalid_argument("assign_points: empty center set");
    if (s.d != q.centers.cols()) throw std::invalid_argument("assign_points: dimension mismatch");
    const std::size_t d = s.d;
    std::vector<std::size_t> labels(s.n);
    for_each_chunk(s.n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::span<const double> x{s.data + i * d, d};
            std::size_t best = 0;
            double best_cost = div(x, q.centers.row(0));
            for (std::size_t c = 1; c < q.centers.rows(); ++c) {
                const double cost = div(x, q.centers.row(c));
                if (cost < best_cost) {
                    best_cost = cost;
                    best = c;
                }
            }
            labels[i] = best;
        }
    });
    return labels;
}

DatasetStats dataset_stats(PointsView s, const Divergence& div) {
    DatasetStats stats;
    stats.mean = dataset_mean(s);
    if (s.weights == nullptr && mahalanobis_companion(div).is_diagonal()) {
        std::vector<double> coord_sums, coord_sq_sums;
        detail::coordinate_sums(s, coord_sums, coord_sq_sums);
        stats.central_cost = detail::summary_central_cost(s.n, coord_sums, coord_sq_sums,
                                                          stats.mean, div);
    } else {
        stats.central_cost = central_cost(s, stats.mean, div);
    }
    return stats;
}

namespace detail {

void coordinate_sums(PointsView points, std::vector<double>& coord_sums,
                     std::vector<double>& coord_sq_sums) {
    const std::size_t d = points.d;
    const std::vector<double> sums =
        block_vector_sum(points.n, 2 * d, [&](std::size_t i, NeumaierSum* acc) {
            const double* p = points.data + i * d;
            for (std::size_t j = 0; j < d; ++j) {
                acc[j].add(p[j]);
                acc[d + j].add(p[j] * p[j]);
            }
        });
    coord_sums.assign(sums.begin(), sums.begin() + d);
    coord_sq_sums.assign(sums.begin() + d, sums.end());
}

double summary_central_cost(std::size_t count, const std::vector<double>& coord_sums,
                            const std::vector<double>& coord_sq_sums,
                            const std::vector<double>& mean, const Divergence& div) {
    const MahalanobisCompanion& companion = mahalanobis_companion(div);
    if (!companion.is_diagonal())
        throw ConfigError("summary statistics support only diagonal companion matrices");
    NeumaierSum phi;
    const double n = static_cast<double>(count);
    for (std::size_t j = 0; j < mean.size(); ++j) {
        const double term =
            coord_sq_sums[j] - 2.0 * mean[j] * coord_sums[j] + n * mean[j] * mean[j];
        phi.add(companion.diag_entry(j) * (term > 0.0 ? term : 0.0));
    }
    return phi.value();
}

}  // namespace detail

}  // namespace corekit
