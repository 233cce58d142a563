#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "corekit/divergence.hpp"
#include "corekit/types.hpp"

namespace corekit {

// Weighted coordinate-wise mean; unweighted views use implicit weight 1.
std::vector<double> dataset_mean(PointsView s);

// phi_S(Q) = sum_i w_i * min_{q in Q} div(x_i, q).
double quantization_error(PointsView s, const CenterSet& q, const Divergence& div);

// phi_S({mu}) under the companion distance d_A of `div`.
double central_cost(PointsView s, std::span<const double> mean, const Divergence& div);
double central_cost(PointsView s, const Divergence& div);

// Index of a minimizing center per point; ties broken by lowest center index.
std::vector<std::size_t> assign_points(PointsView s, const CenterSet& q, const Divergence& div);

// Mean and central cost in one shot. With a diagonal companion the cost comes
// from the V - 2*mu*U + n*mu^2 identity, the same reduction the distributed
// summaries use, so a one-partition run reproduces these stats bit for bit.
DatasetStats dataset_stats(PointsView s, const Divergence& div);

// min_{q in Q} div(x, q) for a single point.
double nearest_center_cost(std::span<const double> x, const CenterSet& q, const Divergence& div);

namespace detail {

// One fused pass filling per-coordinate sums U_j and squared sums V_j.
void coordinate_sums(PointsView points, std::vector<double>& coord_sums,
                     std::vector<double>& coord_sq_sums);

// phi({mean}) from (count, U, V) under a diagonal companion; throws ConfigError
// for dense companions (cross moments are not summarized).
double summary_central_cost(std::size_t count, const std::vector<double>& coord_sums,
                            const std::vector<double>& coord_sq_sums,
                            const std::vector<double>& mean, const Divergence& div);

}  // namespace detail

}  // namespace corekit
