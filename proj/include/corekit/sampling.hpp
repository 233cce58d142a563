#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "corekit/divergence.hpp"
#include "corekit/rng.hpp"
#include "corekit/types.hpp"

namespace corekit {

struct SamplingDistribution {
    std::vector<double> probs;       // strictly positive, sums to 1
    std::vector<double> cumulative;  // nondecreasing prefix sums, ends at 1
};

struct SamplerConfig {
    std::size_t m = 1;
    std::uint64_t seed = 0;
    // Target parameters, recorded for reporting only; m is never derived from
    // them (the theory's constant is unspecified).
    double epsilon = 0.0;
    double delta = 0.0;
    std::size_t k = 0;
};

// Validates probs (nonnegative, strictly positive, sum within 1e-12 of 1) and
// builds the prefix array, pinning the final entry to exactly 1.
SamplingDistribution make_sampling_distribution(std::vector<double> probs);

// q(x) = 1/2 * 1/n + 1/2 * d_A(x, mean)^2 / sum of d_A(x', mean)^2.
// A zero distance sum (all points identical) redistributes the second
// component uniformly.
SamplingDistribution lwcs_distribution(const Dataset& x, const Divergence& div);

// m independent draws with replacement from q; entry weight is 1/(m*q(x)).
Coreset importance_sample(const Dataset& x, const SamplingDistribution& q, const SamplerConfig& cfg);

// Mixture sampler for q above: two passes over X plus the m draws.
Coreset lightweight_coreset(const Dataset& x, const SamplerConfig& cfg, const Divergence& div);

// m uniform draws with replacement, each weighted n/m.
Coreset uniform_coreset(const Dataset& x, const SamplerConfig& cfg);

// Sensitivity-based baseline: D^2-seed k bicriteria centers, bound each
// point's sensitivity from its cluster, then importance-sample. k+1 passes.
Coreset sensitivity_coreset(const Dataset& x, const SamplerConfig& cfg, std::size_t k,
                            const Divergence& div);

// s(x) = 16 d_A(x, mean)^2 / mean squared distance + 16; 32 on a zero-variance
// dataset. The bulk form shares the two stats passes across all points.
double point_sensitivity_bound(const Dataset& x, std::size_t index, const Divergence& div);
std::vector<double> point_sensitivity_bounds(const Dataset& x, const Divergence& div);

// Cost-preserving cleanup: merges exactly-equal points by summing weights,
// keeping first-occurrence order.
Coreset merge_duplicate_points(const Coreset& c);

namespace detail {

// Summary-identity global stats shared by the single-machine and distributed
// samplers: mean from coordinate sums, phi_X({mu}) from the
// V - 2*mu*U + n*mu^2 identity under a diagonal companion.
struct LwcsGlobals {
    std::vector<double> mean;
    double phi = 0.0;
    std::size_t n = 0;
};

// Stage-1 component flags for draws 0..m-1 on stream (seed, "lwcs/branch");
// true marks the uniform component.
std::vector<bool> lwcs_branch_flags(std::uint64_t seed, std::size_t m);

// Worker-side sampler for one machine's points: u uniform picks then v
// distance-proportional picks, each weighted by the global q. The machine's
// pick streams derive from substream_seed(seed, machine_id). Appends to
// out_points/out_weights; returns the number of full passes over `local`.
std::size_t lwcs_component_sample(PointsView local, const LwcsGlobals& g, std::size_t u,
                                  std::size_t v, std::uint64_t seed, std::uint64_t machine_id,
                                  std::size_t m, const Divergence& div, Matrix& out_points,
                                  std::vector<double>& out_weights);

}  // namespace detail

}  // namespace corekit
