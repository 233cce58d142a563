#include "corekit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "corekit/accumulate.hpp"
#include "corekit/core.hpp"
#include "corekit/solver.hpp"

namespace corekit {

namespace lw = detail;

namespace {

std::size_t floor_pick(double u, std::size_t n) {
    const auto idx = static_cast<std::size_t>(u * static_cast<double>(n));
    return idx >= n ? n - 1 : idx;
}

std::size_t prefix_pick(const std::vector<double>& prefix, double target) {
    const auto it = std::upper_bound(prefix.begin(), prefix.end(), target);
    return it == prefix.end() ? prefix.size() - 1 : static_cast<std::size_t>(it - prefix.begin());
}

void require_domain(const Divergence& div, const Dataset& x) {
    const DomainReport rep = validate_domain(div, x);
    if (!rep.ok)
        throw DomainError("point at row " + std::to_string(rep.row) + ", column " +
                              std::to_string(rep.column) + " lies outside the divergence domain",
                          rep.column, rep.value);
}

}  // namespace

SamplingDistribution make_sampling_distribution(std::vector<double> probs) {
    if (probs.empty()) throw std::invalid_argument("sampling distribution: no entries");
    NeumaierSum total;
    for (const double p : probs) {
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::invalid_argument("sampling distribution: probabilities must be positive");
        total.add(p);
    }
    if (std::abs(total.value() - 1.0) > 1e-12)
        throw std::invalid_argument("sampling distribution: probabilities must sum to 1");

    SamplingDistribution q;
    q.cumulative.resize(probs.size());
    NeumaierSum running;
    double prev = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        running.add(probs[i]);
        prev = std::max(prev, running.value());
        q.cumulative[i] = prev;
    }
    q.cumulative.back() = 1.0;
    for (std::size_t i = probs.size(); i-- > 1;)
        if (q.cumulative[i - 1] > q.cumulative[i]) q.cumulative[i - 1] = q.cumulative[i];
    q.probs = std::move(probs);
    return q;
}

SamplingDistribution lwcs_distribution(const Dataset& x, const Divergence& div) {
    if (div.has_domain_box()) require_domain(div, x);
    const std::size_t n = x.n();
    const std::vector<double> mean = dataset_mean(x);

    std::vector<double> dist(n);
    for_each_chunk(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            dist[i] = div.companion_distance(x.point(i), mean);
    });
    const double total = block_sum(n, [&](std::size_t i) { return dist[i]; });

    std::vector<double> probs(n);
    const double uniform_part = 0.5 / static_cast<double>(n);
    if (total > 0.0) {
        for (std::size_t i = 0; i < n; ++i) probs[i] = uniform_part + 0.5 * dist[i] / total;
    } else {
        for (std::size_t i = 0; i < n; ++i) probs[i] = 1.0 / static_cast<double>(n);
    }
    return make_sampling_distribution(std::move(probs));
}

Coreset importance_sample(const Dataset& x, const SamplingDistribution& q, const SamplerConfig& cfg) {
    if (cfg.m == 0) throw std::invalid_argument("importance_sample: m must be >= 1");
    if (q.probs.size() != x.n())
        throw std::invalid_argument("importance_sample: distribution size mismatch");
    RandomStream pick(cfg.seed, stream_tag("importance/pick"));
    const double m = static_cast<double>(cfg.m);

    Coreset c;
    c.points = Matrix(0, x.dim());
    c.weights.reserve(cfg.m);
    for (std::size_t j = 0; j < cfg.m; ++j) {
        const std::size_t idx = prefix_pick(q.cumulative, pick.uniform_at(j));
        c.points.push_row(x.point(idx));
        c.weights.push_back(1.0 / (m * q.probs[idx]));
    }
    return c;
}

namespace detail {

std::vector<bool> lwcs_branch_flags(std::uint64_t seed, std::size_t m) {
    RandomStream branch(seed, stream_tag("lwcs/branch"));
    std::vector<bool> flags(m);
    for (std::size_t i = 0; i < m; ++i) flags[i] = branch.uniform_at(i) < 0.5;
    return flags;
}

std::size_t lwcs_component_sample(PointsView local, const LwcsGlobals& g, std::size_t u,
                                  std::size_t v, std::uint64_t seed, std::uint64_t machine_id,
                                  std::size_t m, const Divergence& div, Matrix& out_points,
                                  std::vector<double>& out_weights) {
    if (u + v == 0) return 0;
    if (local.n == 0) throw std::invalid_argument("component sample: empty point set");
    const std::size_t d = local.d;
    const std::uint64_t sub = substream_seed(seed, machine_id);
    RandomStream uniform_pick(sub, stream_tag("lwcs/pick_uniform"));
    RandomStream distance_pick(sub, stream_tag("lwcs/pick_distance"));

    // Local distance pass (the machine's second and final scan), only needed
    // when nonuniform draws were allocated here.
    std::size_t passes = 0;
    std::vector<double> dist;
    std::vector<double> prefix;
    double local_total = 0.0;
    if (v > 0) {
        passes = 1;
        dist.resize(local.n);
        for_each_chunk(local.n, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i)
                dist[i] = div.companion_distance({local.data + i * d, d}, g.mean);
        });
        prefix.resize(local.n);
        double running = 0.0;
        for (std::size_t i = 0; i < local.n; ++i) {
            running += dist[i];
            prefix[i] = running;
        }
        local_total = running;
    }

    const double n_global = static_cast<double>(g.n);
    auto emit = [&](std::size_t idx) {
        const std::span<const double> p{local.data + idx * d, d};
        const double dx = dist.empty() ? div.companion_distance(p, g.mean) : dist[idx];
        const double q = g.phi > 0.0 ? 0.5 / n_global + 0.5 * dx / g.phi : 1.0 / n_global;
        out_points.push_row(p);
        out_weights.push_back(1.0 / (static_cast<double>(m) * q));
    };

    for (std::size_t j = 0; j < u; ++j) emit(floor_pick(uniform_pick.uniform_at(j), local.n));
    for (std::size_t j = 0; j < v; ++j) {
        const double r = distance_pick.uniform_at(j);
        // Degenerate local mass: nonuniform draw falls back to uniform here.
        if (local_total > 0.0)
            emit(prefix_pick(prefix, r * local_total));
        else
            emit(floor_pick(r, local.n));
    }
    return passes;
}

}  // namespace detail

Coreset lightweight_coreset(const Dataset& x, const SamplerConfig& cfg, const Divergence& div) {
    if (cfg.m == 0) throw std::invalid_argument("lightweight_coreset: m must be >= 1");
    if (div.has_domain_box()) require_domain(div, x);
    const std::size_t n = x.n();
    const std::size_t d = x.dim();

    // Pass 1: fused coordinate sums and squared sums.
    std::vector<double> coord_sums, coord_sq_sums;
    lw::coordinate_sums(x, coord_sums, coord_sq_sums);
    lw::LwcsGlobals g;
    g.n = n;
    g.mean.resize(d);
    for (std::size_t j = 0; j < d; ++j) g.mean[j] = coord_sums[j] / static_cast<double>(n);
    g.phi = mahalanobis_companion(div).is_diagonal()
                ? lw::summary_central_cost(n, coord_sums, coord_sq_sums, g.mean, div)
                : central_cost(x, g.mean, div);

    const std::vector<bool> flags = lw::lwcs_branch_flags(cfg.seed, cfg.m);
    const auto nu = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));

    Coreset c;
    c.points = Matrix(0, d);
    c.weights.reserve(cfg.m);
    lw::lwcs_component_sample(x, g, nu, cfg.m - nu, cfg.seed, 0, cfg.m, div, c.points, c.weights);
    return c;
}

Coreset uniform_coreset(const Dataset& x, const SamplerConfig& cfg) {
    if (cfg.m == 0) throw std::invalid_argument("uniform_coreset: m must be >= 1");
    RandomStream pick(cfg.seed, stream_tag("uniform/pick"));
    const double w = static_cast<double>(x.n()) / static_cast<double>(cfg.m);

    Coreset c;
    c.points = Matrix(0, x.dim());
    c.weights.assign(cfg.m, w);
    for (std::size_t j = 0; j < cfg.m; ++j)
        c.points.push_row(x.point(floor_pick(pick.uniform_at(j), x.n())));
    return c;
}

Coreset sensitivity_coreset(const Dataset& x, const SamplerConfig& cfg, std::size_t k,
                            const Divergence& div) {
    if (cfg.m == 0) throw std::invalid_argument("sensitivity_coreset: m must be >= 1");
    if (k == 0) throw std::invalid_argument("sensitivity_coreset: k must be >= 1");
    if (div.has_domain_box()) require_domain(div, x);
    const std::size_t n = x.n();

    // Bicriteria solution: k seeding passes.
    const std::uint64_t seeding_seed = mix64(cfg.seed ^ stream_tag("cs/seeding"));
    const CenterSet b = dsq_seed(x, k, seeding_seed, div);

    // One more pass: nearest center, its index, and per-cluster totals.
    std::vector<double> cost(n);
    std::vector<std::size_t> label(n);
    const std::size_t d = x.dim();
    for_each_chunk(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const std::span<const double> p{x.points.row(i).data(), d};
            std::size_t best = 0;
            double best_cost = div(p, b.centers.row(0));
            for (std::size_t c = 1; c < b.centers.rows(); ++c) {
                const double v = div(p, b.centers.row(c));
                if (v < best_cost) {
                    best_cost = v;
                    best = c;
                }
            }
            cost[i] = best_cost;
            label[i] = best;
        }
    });
    const double phi_b = block_sum(n, [&](std::size_t i) { return cost[i]; });
    std::vector<NeumaierSum> cluster_cost(k);
    std::vector<double> cluster_size(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        cluster_cost[label[i]].add(cost[i]);
        cluster_size[label[i]] += 1.0;
    }

    std::vector<double> probs(n);
    const double cbar = phi_b / static_cast<double>(n);
    if (cbar > 0.0) {
        const double alpha = 16.0 * (std::log(static_cast<double>(k)) + 2.0);
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = label[i];
            s[i] = alpha * cost[i] / cbar +
                   2.0 * alpha * cluster_cost[c].value() / (cluster_size[c] * cbar) +
                   4.0 * static_cast<double>(n) / cluster_size[c];
        }
        const double s_total = block_sum(n, [&](std::size_t i) { return s[i]; });
        for (std::size_t i = 0; i < n; ++i) probs[i] = s[i] / s_total;
    } else {
        // All points sit on bicriteria centers; sensitivities flatten out.
        std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(n));
    }
    return importance_sample(x, make_sampling_distribution(std::move(probs)), cfg);
}

std::vector<double> point_sensitivity_bounds(const Dataset& x, const Divergence& div) {
    if (div.has_domain_box()) require_domain(div, x);
    const std::size_t n = x.n();
    const std::vector<double> mean = dataset_mean(x);
    std::vector<double> dist(n);
    for_each_chunk(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            dist[i] = div.companion_distance(x.point(i), mean);
    });
    const double total = block_sum(n, [&](std::size_t i) { return dist[i]; });

    std::vector<double> s(n, 32.0);
    if (total > 0.0) {
        const double mean_dist = total / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = 16.0 * dist[i] / mean_dist + 16.0;
    }
    return s;
}

double point_sensitivity_bound(const Dataset& x, std::size_t index, const Divergence& div) {
    if (index >= x.n()) throw std::invalid_argument("point_sensitivity_bound: index out of range");
    return point_sensitivity_bounds(x, div)[index];
}

Coreset merge_duplicate_points(const Coreset& c) {
    Coreset merged;
    merged.points = Matrix(0, c.points.cols());
    std::map<std::vector<double>, std::size_t> seen;
    for (std::size_t i = 0; i < c.points.rows(); ++i) {
        const auto row = c.points.row(i);
        std::vector<double> key(row.begin(), row.end());
        const auto [it, inserted] = seen.emplace(std::move(key), merged.weights.size());
        if (inserted) {
            merged.points.push_row(row);
            merged.weights.push_back(c.weights[i]);
        } else {
            merged.weights[it->second] += c.weights[i];
        }
    }
    return merged;
}

}  // namespace corekit
