#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "corekit/divergence.hpp"
#include "corekit/solver.hpp"
#include "corekit/synth.hpp"
#include "corekit/types.hpp"

namespace corekit {

enum class SummaryMethod { uniform, lwcs, cs, full };
std::string to_string(SummaryMethod method);
SummaryMethod summary_method_from_string(const std::string& name);

// eta = cost_candidate / cost_reference - 1.
double relative_error(double cost_candidate, double cost_reference);

// |phi_X(Q) - phi_C(Q)| / (phi_X(Q)/2 + phi_X({mean})/2); C is an epsilon
// lightweight coreset for this Q iff the value is <= epsilon.
double coreset_property_margin(const Dataset& x, const Coreset& c, const CenterSet& q,
                               const Divergence& div);

struct PropertyReport {
    std::size_t probes = 0;
    double max_margin = 0.0;
    CenterSet argmax_probe;
};

// Empirical stand-in for the "for any Q" quantifier: probes mix k-subsets of
// the data, fresh seedings, perturbed solver outputs on C, and centers pushed
// ~1e6 data radii away. probe_count splits evenly across the four kinds.
PropertyReport estimate_required_epsilon(const Dataset& x, const Coreset& c,
                                         std::size_t probe_count, std::uint64_t seed,
                                         const Divergence& div, std::size_t k);

// Exhaustive weighted k-means over all k^n assignments; feasible for n <= 16.
SolveResult exact_kmeans(PointsView s, std::size_t k, const Divergence& div);

struct GapReport {
    double lhs = 0.0;           // phi_X of the best centers found on C
    double rhs = 0.0;           // phi_X of the best centers on X + 4 eps phi_X({mean})
    double epsilon_hat = 0.0;
    double opt_cost_x = 0.0;
    bool holds = false;
    bool exact = false;         // true when both optima came from enumeration
};

GapReport theorem1_gap(const Dataset& x, const Coreset& c, const SolveConfig& cfg,
                       const Divergence& div);

struct ERMConfig {
    std::size_t n = 1000;
    std::size_t m = 100;
    std::size_t k = 2;
    std::uint64_t seed = 0;
    SummaryMethod method = SummaryMethod::lwcs;
    double target_epsilon = 0.5;
    std::size_t truth_samples = 1000000;
    std::size_t probe_count = 16;
};

struct ERMReport {
    std::size_t n = 0, m = 0, k = 0;
    std::size_t truth_samples = 0;
    std::size_t probes = 0;
    double kurtosis_estimate = 0.0;
    double variance_estimate = 0.0;   // sigma^2(P): expected companion distance to the mean
    double fourth_moment_estimate = 0.0;
    bool kurtosis_reliable = true;
    double erm_epsilon = 0.0;         // max probe ratio of the population margin
    double target_epsilon = 0.0;
    double violation_fraction = 0.0;  // probes violating the margin at target_epsilon
};

ERMReport erm_experiment(const GeneratorSpec& gen, const ERMConfig& cfg, const Divergence& div);

struct BenchmarkConfig {
    std::vector<SummaryMethod> methods;
    std::vector<std::size_t> m_grid;
    std::vector<std::size_t> k_grid;
    std::size_t repeats = 50;
    std::uint64_t seed = 0;
    std::size_t max_iters = 100;
    double rel_tol = 1e-4;
    std::size_t restarts = 1;
    bool seeding_only = false;
};

struct BenchmarkResult {
    SummaryMethod method = SummaryMethod::full;
    std::size_t m = 0;  // 0 for full (no subsample)
    std::size_t k = 0;
    std::uint64_t seed = 0;
    double relative_error = 0.0;
    double construct_seconds = 0.0;
    double solve_seconds = 0.0;
    double speedup = 1.0;  // full solve time / (construct + solve)
};

struct BenchmarkSummary {
    SummaryMethod method = SummaryMethod::full;
    std::size_t m = 0, k = 0, repeats = 0;
    double eta_mean = 0.0;
    double eta_ci95 = 0.0;  // normal-approximation half width from the SE
    double construct_mean = 0.0;
    double solve_mean = 0.0;
    double speedup_mean = 0.0;
};

std::vector<BenchmarkResult> benchmark(const Dataset& x, const BenchmarkConfig& cfg,
                                       const Divergence& div);
std::vector<BenchmarkSummary> summarize_benchmark(const std::vector<BenchmarkResult>& results);

}  // namespace corekit
