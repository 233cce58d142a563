#include "corekit/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "corekit/accumulate.hpp"
#include "corekit/core.hpp"
#include "corekit/rng.hpp"
#include "corekit/sampling.hpp"

namespace corekit {

namespace {

constexpr double kZ95 = 1.959963984540054;

double seconds_between(std::chrono::steady_clock::time_point a,
                       std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

}  // namespace

std::string to_string(SummaryMethod method) {
    switch (method) {
        case SummaryMethod::uniform: return "uniform";
        case SummaryMethod::lwcs: return "lwcs";
        case SummaryMethod::cs: return "cs";
        case SummaryMethod::full: return "full";
    }
    return "unknown";
}

SummaryMethod summary_method_from_string(const std::string& name) {
    if (name == "uniform") return SummaryMethod::uniform;
    if (name == "lwcs") return SummaryMethod::lwcs;
    if (name == "cs") return SummaryMethod::cs;
    if (name == "full") return SummaryMethod::full;
    throw ConfigError("unknown method: " + name + " (expected uniform|lwcs|cs|full)");
}

double relative_error(double cost_candidate, double cost_reference) {
    if (!(cost_reference > 0.0))
        throw std::invalid_argument("relative_error: reference cost must be positive");
    return cost_candidate / cost_reference - 1.0;
}

double coreset_property_margin(const Dataset& x, const Coreset& c, const CenterSet& q,
                               const Divergence& div) {
    const double phi_x = quantization_error(x, q, div);
    const double phi_c = quantization_error(c, q, div);
    CenterSet at_mean;
    at_mean.centers = Matrix(0, x.dim());
    at_mean.centers.push_row(dataset_mean(x));
    const double phi_mean = quantization_error(x, at_mean, div);
    const double denom = 0.5 * phi_x + 0.5 * phi_mean;
    if (!(denom > 0.0))
        throw std::invalid_argument("coreset_property_margin: degenerate zero denominator");
    return std::abs(phi_x - phi_c) / denom;
}

namespace {

// The documented probe mix behind the "for any Q" quantifier: probe_count
// splits evenly across (a) k-subsets of data points, (b) fresh D^2 seedings,
// (c) perturbations of a solver run on C, (d) centers ~1e6 data radii out
// (domain-box divergences use box corners instead).
std::vector<CenterSet> make_probes(const Dataset& x, const Coreset& c, std::size_t probe_count,
                                   std::uint64_t seed, const Divergence& div, std::size_t k) {
    if (probe_count == 0) throw std::invalid_argument("probes: probe_count must be >= 1");
    if (k == 0) throw std::invalid_argument("probes: k must be >= 1");
    const std::size_t n = x.n();
    const std::size_t d = x.dim();

    std::vector<double> lo(d, std::numeric_limits<double>::infinity());
    std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = x.point(i);
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], p[j]);
            hi[j] = std::max(hi[j], p[j]);
        }
    }
    std::vector<double> spread(d);
    for (std::size_t j = 0; j < d; ++j) spread[j] = hi[j] > lo[j] ? hi[j] - lo[j] : 1.0;
    const std::vector<double> mean = dataset_mean(x);

    std::size_t counts[4];
    const std::size_t base = probe_count / 4;
    const std::size_t rem = probe_count % 4;
    for (std::size_t i = 0; i < 4; ++i) counts[i] = base + (i < rem ? 1 : 0);

    std::vector<CenterSet> probes;
    probes.reserve(probe_count);

    // (a) k-subsets of the data.
    RandomStream subset(seed, stream_tag("probe/subset"));
    for (std::size_t t = 0; t < counts[0]; ++t) {
        std::vector<std::size_t> chosen;
        std::size_t attempts = 0;
        while (chosen.size() < k) {
            const auto idx = static_cast<std::size_t>(subset.next_uniform() * static_cast<double>(n));
            const std::size_t clamped = idx >= n ? n - 1 : idx;
            const bool dup = std::find(chosen.begin(), chosen.end(), clamped) != chosen.end();
            if (!dup || ++attempts > 64 * k || chosen.size() >= n) chosen.push_back(clamped);
        }
        CenterSet q;
        q.centers = Matrix(0, d);
        for (const std::size_t idx : chosen) q.centers.push_row(x.point(idx));
        probes.push_back(std::move(q));
    }

    // (b) independent D^2 seedings of the data.
    const std::uint64_t seeding_base = mix64(seed ^ stream_tag("probe/seeding"));
    for (std::size_t t = 0; t < counts[1]; ++t)
        probes.push_back(dsq_seed(x, k, substream_seed(seeding_base, t), div));

    // (c) one solver run on C, then a perturbation ramp around it.
    if (counts[2] > 0) {
        SolveConfig sc;
        sc.k = k;
        sc.seed = mix64(seed ^ stream_tag("probe/solve"));
        sc.max_iters = 5;
        sc.restarts = 1;
        const CenterSet base_q = solve_kmeans(c, sc, div).centers;
        RandomStream g1(seed, stream_tag("probe/perturb_u1"));
        RandomStream g2(seed, stream_tag("probe/perturb_u2"));
        for (std::size_t t = 0; t < counts[2]; ++t) {
            const double scale =
                counts[2] == 1 ? 0.0 : static_cast<double>(t) / static_cast<double>(counts[2] - 1);
            CenterSet q = base_q;
            for (std::size_t r = 0; r < q.centers.rows(); ++r) {
                for (std::size_t j = 0; j < d; ++j) {
                    const std::uint64_t at = (t * q.centers.rows() + r) * d + j;
                    double v = q.centers(r, j) + scale * 0.2 * spread[j] * gaussian_at(g1, g2, at);
                    if (div.has_domain_box()) v = std::clamp(v, div.domain_lo(), div.domain_hi());
                    q.centers(r, j) = v;
                }
            }
            probes.push_back(std::move(q));
        }
    }

    // (d) adversarially distant centers.
    RandomStream dir(seed, stream_tag("probe/dir"));
    for (std::size_t t = 0; t < counts[3]; ++t) {
        CenterSet q;
        q.centers = Matrix(0, d);
        for (std::size_t r = 0; r < k; ++r) {
            std::vector<double> center(d);
            for (std::size_t j = 0; j < d; ++j) {
                const bool up = dir.next_uniform() < 0.5;
                if (div.has_domain_box())
                    center[j] = up ? div.domain_hi() : div.domain_lo();
                else
                    center[j] = mean[j] + (up ? 1.0 : -1.0) * 1e6 * spread[j];
            }
            q.centers.push_row(center);
        }
        probes.push_back(std::move(q));
    }
    return probes;
}

}  // namespace

PropertyReport estimate_required_epsilon(const Dataset& x, const Coreset& c,
                                         std::size_t probe_count, std::uint64_t seed,
                                         const Divergence& div, std::size_t k) {
    const std::vector<CenterSet> probes = make_probes(x, c, probe_count, seed, div, k);

    CenterSet at_mean;
    at_mean.centers = Matrix(0, x.dim());
    at_mean.centers.push_row(dataset_mean(x));
    const double phi_mean = quantization_error(x, at_mean, div);

    PropertyReport report;
    report.probes = probes.size();
    for (const CenterSet& q : probes) {
        const double phi_x = quantization_error(x, q, div);
        const double phi_c = quantization_error(c, q, div);
        const double denom = 0.5 * phi_x + 0.5 * phi_mean;
        const double margin = denom > 0.0 ? std::abs(phi_x - phi_c) / denom : 0.0;
        if (margin >= report.max_margin) {
            report.max_margin = margin;
            report.argmax_probe = q;
        }
    }
    return report;
}

SolveResult exact_kmeans(PointsView s, std::size_t k, const Divergence& div) {
    if (s.n == 0) throw std::invalid_argument("exact_kmeans: empty input");
    if (k == 0) throw std::invalid_argument("exact_kmeans: k must be >= 1");
    double combos = 1.0;
    for (std::size_t i = 0; i < s.n; ++i) {
        combos *= static_cast<double>(k);
        if (combos > 2e7) throw std::invalid_argument("exact_kmeans: k^n too large to enumerate");
    }
    const std::size_t d = s.d;

    std::vector<std::size_t> assign(s.n, 0);
    std::vector<double> sums(k * d);
    std::vector<double> totals(k);
    Matrix centers(k, d);

    SolveResult best;
    best.cost = std::numeric_limits<double>::infinity();
    for (;;) {
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(totals.begin(), totals.end(), 0.0);
        for (std::size_t i = 0; i < s.n; ++i) {
            const double w = s.weight(i);
            const double* p = s.data + i * d;
            for (std::size_t j = 0; j < d; ++j) sums[assign[i] * d + j] += w * p[j];
            totals[assign[i]] += w;
        }
        for (std::size_t g = 0; g < k; ++g)
            for (std::size_t j = 0; j < d; ++j)
                centers(g, j) = totals[g] > 0.0 ? sums[g * d + j] / totals[g]
                                                : s.data[j];  // unused group: park at point 0
        double cost = 0.0;
        for (std::size_t i = 0; i < s.n; ++i) {
            const double w = s.weight(i);
            if (w > 0.0) cost += w * div({s.data + i * d, d}, centers.row(assign[i]));
        }
        if (cost < best.cost) {
            best.cost = cost;
            best.centers.centers = centers;
        }

        // Next base-k assignment vector.
        std::size_t pos = 0;
        while (pos < s.n) {
            if (++assign[pos] < k) break;
            assign[pos++] = 0;
        }
        if (pos == s.n) break;
    }
    // The enumerated minimum is the partition cost; re-derive the reported
    // cost as a nearest-center evaluation so it matches quantization_error.
    best.cost = quantization_error(s, best.centers, div);
    return best;
}

GapReport theorem1_gap(const Dataset& x, const Coreset& c, const SolveConfig& cfg,
                       const Divergence& div) {
    GapReport report;
    report.exact = cfg.k <= 3 && x.n() <= 12 && c.size() <= 12;

    CenterSet q_c, q_x;
    if (report.exact) {
        q_c = exact_kmeans(c, cfg.k, div).centers;
        q_x = exact_kmeans(x, cfg.k, div).centers;
    } else {
        q_c = solve_kmeans(c, cfg, div).centers;
        q_x = solve_kmeans(x, cfg, div).centers;
    }
    report.lhs = quantization_error(x, q_c, div);
    report.opt_cost_x = quantization_error(x, q_x, div);
    report.epsilon_hat =
        estimate_required_epsilon(x, c, 200, cfg.seed, div, cfg.k).max_margin;

    CenterSet at_mean;
    at_mean.centers = Matrix(0, x.dim());
    at_mean.centers.push_row(dataset_mean(x));
    const double phi_mean = quantization_error(x, at_mean, div);
    report.rhs = report.opt_cost_x + 4.0 * report.epsilon_hat * phi_mean;
    report.holds = report.lhs <= report.rhs * (1.0 + 1e-12);
    return report;
}

ERMReport erm_experiment(const GeneratorSpec& gen, const ERMConfig& cfg, const Divergence& div) {
    if (cfg.n == 0 || cfg.m == 0 || cfg.k == 0 || cfg.truth_samples == 0)
        throw std::invalid_argument("erm_experiment: n, m, k, truth_samples must be >= 1");

    const Dataset x = sample_dataset(gen, cfg.n, substream_seed(cfg.seed, 1));
    const Dataset truth = sample_dataset(gen, cfg.truth_samples, substream_seed(cfg.seed, 2));

    ERMReport report;
    report.n = cfg.n;
    report.m = cfg.m;
    report.k = cfg.k;
    report.truth_samples = cfg.truth_samples;
    report.target_epsilon = cfg.target_epsilon;
    report.kurtosis_reliable = finite_fourth_moment(gen);

    // sigma^2(P) and K(P) from the ground-truth proxy sample.
    const std::vector<double> truth_mean = dataset_mean(truth);
    const std::size_t nt = truth.n();
    const double second = block_sum(nt, [&](std::size_t i) {
                              return div.companion_distance(truth.point(i), truth_mean);
                          }) /
                          static_cast<double>(nt);
    const double fourth = block_sum(nt, [&](std::size_t i) {
                              const double v = div.companion_distance(truth.point(i), truth_mean);
                              return v * v;
                          }) /
                          static_cast<double>(nt);
    report.variance_estimate = second;
    report.fourth_moment_estimate = fourth;
    report.kurtosis_estimate = second > 0.0 ? fourth / (second * second) : 0.0;

    SamplerConfig sampler;
    sampler.m = cfg.m;
    sampler.seed = substream_seed(cfg.seed, 3);
    sampler.k = cfg.k;
    Coreset c;
    switch (cfg.method) {
        case SummaryMethod::lwcs: c = lightweight_coreset(x, sampler, div); break;
        case SummaryMethod::uniform: c = uniform_coreset(x, sampler); break;
        case SummaryMethod::cs: c = sensitivity_coreset(x, sampler, cfg.k, div); break;
        case SummaryMethod::full: {
            c.points = x.points;
            c.weights.assign(x.n(), 1.0);
            break;
        }
    }

    const std::vector<CenterSet> probes =
        make_probes(x, c, cfg.probe_count, substream_seed(cfg.seed, 4), div, cfg.k);
    report.probes = probes.size();

    const double n_as_double = static_cast<double>(cfg.n);
    std::size_t violations = 0;
    for (const CenterSet& q : probes) {
        const double pop = quantization_error(truth, q, div) / static_cast<double>(nt);
        const double est = quantization_error(c, q, div) / n_as_double;
        const double gap = std::abs(pop - est);
        const double denom = 0.5 * pop + 0.5 * second;
        const double ratio = denom > 0.0 ? gap / denom : (gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        report.erm_epsilon = std::max(report.erm_epsilon, ratio);
        if (ratio > cfg.target_epsilon) ++violations;
    }
    report.violation_fraction =
        probes.empty() ? 0.0 : static_cast<double>(violations) / static_cast<double>(probes.size());
    return report;
}

std::vector<BenchmarkResult> benchmark(const Dataset& x, const BenchmarkConfig& cfg,
                                       const Divergence& div) {
    if (cfg.methods.empty()) throw ConfigError("benchmark: empty method set");
    if (cfg.k_grid.empty()) throw ConfigError("benchmark: empty k grid");
    if (cfg.repeats == 0) throw ConfigError("benchmark: repeats must be >= 1");
    const bool needs_m = std::any_of(cfg.methods.begin(), cfg.methods.end(),
                                     [](SummaryMethod m) { return m != SummaryMethod::full; });
    if (needs_m && cfg.m_grid.empty()) throw ConfigError("benchmark: empty m grid");

    using clock = std::chrono::steady_clock;
    std::vector<BenchmarkResult> results;
    for (const std::size_t k : cfg.k_grid) {
        for (std::size_t r = 0; r < cfg.repeats; ++r) {
            const std::uint64_t seed_kr = substream_seed(substream_seed(cfg.seed, k), r);
            SolveConfig solve_cfg;
            solve_cfg.k = k;
            solve_cfg.seed = seed_kr;
            solve_cfg.max_iters = cfg.max_iters;
            solve_cfg.rel_tol = cfg.rel_tol;
            solve_cfg.restarts = cfg.restarts;
            solve_cfg.seeding_only = cfg.seeding_only;

            const auto full_t0 = clock::now();
            const SolveResult full = solve_kmeans(x, solve_cfg, div);
            const double full_seconds = seconds_between(full_t0, clock::now());

            for (const SummaryMethod method : cfg.methods) {
                if (method == SummaryMethod::full) {
                    BenchmarkResult row;
                    row.method = method;
                    row.m = 0;
                    row.k = k;
                    row.seed = seed_kr;
                    row.relative_error = 0.0;
                    row.construct_seconds = 0.0;
                    row.solve_seconds = full_seconds;
                    row.speedup = 1.0;
                    results.push_back(row);
                    continue;
                }
                for (const std::size_t m : cfg.m_grid) {
                    SamplerConfig sampler;
                    sampler.m = m;
                    sampler.seed = substream_seed(mix64(seed_kr ^ stream_tag(to_string(method).c_str())), m);
                    sampler.k = k;

                    const auto c_t0 = clock::now();
                    Coreset c;
                    switch (method) {
                        case SummaryMethod::lwcs: c = lightweight_coreset(x, sampler, div); break;
                        case SummaryMethod::uniform: c = uniform_coreset(x, sampler); break;
                        case SummaryMethod::cs: c = sensitivity_coreset(x, sampler, k, div); break;
                        case SummaryMethod::full: break;  // handled above
                    }
                    const double construct_seconds = seconds_between(c_t0, clock::now());

                    SolveConfig sub_cfg = solve_cfg;
                    sub_cfg.seed = sampler.seed;
                    const auto s_t0 = clock::now();
                    const SolveResult sub = solve_kmeans(c, sub_cfg, div);
                    const double solve_seconds = seconds_between(s_t0, clock::now());

                    BenchmarkResult row;
                    row.method = method;
                    row.m = m;
                    row.k = k;
                    row.seed = sampler.seed;
                    row.relative_error =
                        relative_error(quantization_error(x, sub.centers, div), full.cost);
                    row.construct_seconds = construct_seconds;
                    row.solve_seconds = solve_seconds;
                    const double denom = construct_seconds + solve_seconds;
                    row.speedup = denom > 0.0 ? full_seconds / denom : 0.0;
                    results.push_back(row);
                }
            }
        }
    }
    return results;
}

std::vector<BenchmarkSummary> summarize_benchmark(const std::vector<BenchmarkResult>& results) {
    std::vector<BenchmarkSummary> summaries;
    auto find_cell = [&](const BenchmarkResult& row) -> BenchmarkSummary& {
        for (auto& s : summaries)
            if (s.method == row.method && s.m == row.m && s.k == row.k) return s;
        BenchmarkSummary s;
        s.method = row.method;
        s.m = row.m;
        s.k = row.k;
        summaries.push_back(s);
        return summaries.back();
    };
    for (const BenchmarkResult& row : results) {
        BenchmarkSummary& s = find_cell(row);
        ++s.repeats;
        s.eta_mean += row.relative_error;
        s.construct_mean += row.construct_seconds;
        s.solve_mean += row.solve_seconds;
        s.speedup_mean += row.speedup;
    }
    for (auto& s : summaries) {
        const double count = static_cast<double>(s.repeats);
        s.eta_mean /= count;
        s.construct_mean /= count;
        s.solve_mean /= count;
        s.speedup_mean /= count;
    }
    for (auto& s : summaries) {
        if (s.repeats < 2) continue;
        double ss = 0.0;
        for (const BenchmarkResult& row : results) {
            if (row.method == s.method && row.m == s.m && row.k == s.k) {
                const double delta = row.relative_error - s.eta_mean;
                ss += delta * delta;
            }
        }
        const double count = static_cast<double>(s.repeats);
        const double se = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
        s.eta_ci95 = kZ95 * se;
    }
    return summaries;
}

}  // namespace corekit
