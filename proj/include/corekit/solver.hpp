#pragma once

#include <cstdint>
#include <cstddef>

#include "corekit/core.hpp"
#include "corekit/divergence.hpp"
#include "corekit/types.hpp"

namespace corekit {

struct SolveConfig {
    std::size_t k = 1;
    std::uint64_t seed = 0;
    std::size_t max_iters = 100;
    double rel_tol = 1e-4;
    std::size_t restarts = 1;
    bool seeding_only = false;
};

struct SolveResult {
    CenterSet centers;
    double cost = 0.0;
    std::size_t iters = 0;  // Lloyd steps taken by the winning restart
};

// k-means++ (D-squared) seeding over weighted points. The first center is
// drawn proportional to weight, subsequent ones proportional to
// weight * div(x, nearest chosen center); when all residual mass is zero the
// remaining centers fall back to weight-uniform draws.
CenterSet dsq_seed(PointsView s, std::size_t k, std::uint64_t seed, const Divergence& div);

// One weighted Lloyd update: assign, recompute weighted means, repair empty
// clusters by reseeding to the point of largest weighted divergence.
CenterSet lloyd_step(PointsView s, const CenterSet& q, const Divergence& div);

SolveResult solve_kmeans(PointsView s, const SolveConfig& cfg, const Divergence& div);

}  // namespace corekit
