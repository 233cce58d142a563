#include "corekit/distributed.hpp"

#include <algorithm>
#include <stdexcept>

#include "corekit/accumulate.hpp"
#include "corekit/core.hpp"
#include "corekit/rng.hpp"

namespace corekit {

namespace lw = detail;

PartitionStrategy partition_strategy_from_string(const std::string& name) {
    if (name == "round_robin") return PartitionStrategy::round_robin;
    if (name == "contiguous") return PartitionStrategy::contiguous;
    throw ConfigError("unknown partition strategy: " + name);
}

std::vector<Partition> partition_dataset(const Dataset& x, std::size_t machines,
                                         PartitionStrategy strategy) {
    if (machines == 0) throw std::invalid_argument("partition_dataset: need at least one machine");
    const std::size_t n = x.n();
    const std::size_t d = x.dim();
    std::vector<Partition> parts(machines);
    for (std::size_t i = 0; i < machines; ++i) {
        parts[i].machine_id = i;
        parts[i].points = Matrix(0, d);
    }
    if (strategy == PartitionStrategy::round_robin) {
        for (std::size_t i = 0; i < n; ++i) parts[i % machines].points.push_row(x.point(i));
    } else {
        const std::size_t base = n / machines;
        const std::size_t extra = n % machines;
        std::size_t at = 0;
        for (std::size_t i = 0; i < machines; ++i) {
            const std::size_t take = base + (i < extra ? 1 : 0);
            for (std::size_t r = 0; r < take; ++r) parts[i].points.push_row(x.point(at + r));
            at += take;
        }
    }
    return parts;
}

PartitionSummary summarize_partition(const Partition& p) {
    PartitionSummary s;
    s.count = p.points.rows();
    lw::coordinate_sums(PointsView{p.points.data(), nullptr, p.points.rows(), p.points.cols()},
                        s.coord_sums, s.coord_sq_sums);
    return s;
}

GlobalStats merge_summaries(const std::vector<SummaryMessage>& summaries, const Divergence& div) {
    if (summaries.empty()) throw std::invalid_argument("merge_summaries: no summaries");

    std::vector<const SummaryMessage*> ordered;
    ordered.reserve(summaries.size());
    for (const auto& msg : summaries) ordered.push_back(&msg);
    std::sort(ordered.begin(), ordered.end(),
              [](const SummaryMessage* a, const SummaryMessage* b) {
                  return a->machine_id < b->machine_id;
              });
    for (std::size_t i = 1; i < ordered.size(); ++i)
        if (ordered[i]->machine_id == ordered[i - 1]->machine_id)
            throw std::invalid_argument("merge_summaries: duplicate machine_id");

    const std::size_t d = ordered.front()->summary.coord_sums.size();
    GlobalStats g;
    g.total_count = 0;
    std::vector<NeumaierSum> u_total(d);
    for (const SummaryMessage* msg : ordered) {
        const PartitionSummary& s = msg->summary;
        if (s.coord_sums.size() != d || s.coord_sq_sums.size() != d)
            throw std::invalid_argument("merge_summaries: dimension mismatch");
        g.machine_ids.push_back(msg->machine_id);
        g.counts.push_back(s.count);
        g.total_count += s.count;
        for (std::size_t j = 0; j < d; ++j) u_total[j].add(s.coord_sums[j]);
    }
    if (g.total_count == 0) throw std::invalid_argument("merge_summaries: all partitions empty");

    g.mean.resize(d);
    for (std::size_t j = 0; j < d; ++j)
        g.mean[j] = u_total[j].value() / static_cast<double>(g.total_count);

    NeumaierSum total;
    for (const SummaryMessage* msg : ordered) {
        const PartitionSummary& s = msg->summary;
        const double phi =
            s.count == 0 ? 0.0
                         : lw::summary_central_cost(s.count, s.coord_sums, s.coord_sq_sums,
                                                    g.mean, div);
        g.per_partition_central_cost.push_back(phi);
        total.add(phi);
    }
    g.total_central_cost = total.value();
    return g;
}

namespace {

std::size_t machine_pick(const std::vector<double>& prefix, double u) {
    const double target = u * prefix.back();
    const auto it = std::upper_bound(prefix.begin(), prefix.end(), target);
    return it == prefix.end() ? prefix.size() - 1 : static_cast<std::size_t>(it - prefix.begin());
}

}  // namespace

SampleAllocation allocate_samples(const GlobalStats& g, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw std::invalid_argument("allocate_samples: m must be >= 1");
    const std::size_t p = g.machine_ids.size();

    std::vector<double> count_prefix(p), phi_prefix(p);
    double run_count = 0.0, run_phi = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        run_count += static_cast<double>(g.counts[i]);
        run_phi += g.per_partition_central_cost[i];
        count_prefix[i] = run_count;
        phi_prefix[i] = run_phi;
    }
    // Zero total variance: the nonuniform stage also follows point counts.
    const std::vector<double>& nonuniform_prefix =
        g.total_central_cost > 0.0 ? phi_prefix : count_prefix;

    const std::vector<bool> flags = lw::lwcs_branch_flags(seed, m);
    RandomStream machine(seed, stream_tag("alloc/machine"));
    SampleAllocation alloc;
    alloc.uniform_counts.assign(p, 0);
    alloc.nonuniform_counts.assign(p, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const double u = machine.uniform_at(i);
        if (flags[i])
            ++alloc.uniform_counts[machine_pick(count_prefix, u)];
        else
            ++alloc.nonuniform_counts[machine_pick(nonuniform_prefix, u)];
    }
    return alloc;
}

SampleReply partition_sample(const Partition& p, const GlobalStats& g, std::size_t u,
                             std::size_t v, std::uint64_t seed, std::size_t m,
                             const Divergence& div) {
    SampleReply reply;
    reply.machine_id = p.machine_id;
    reply.points = Matrix(0, p.points.cols());
    lw::LwcsGlobals globals{g.mean, g.total_central_cost, g.total_count};
    reply.data_passes = lw::lwcs_component_sample(
        PointsView{p.points.data(), nullptr, p.points.rows(), p.points.cols()}, globals, u, v,
        seed, p.machine_id, m, div, reply.points, reply.weights);
    return reply;
}

DistributedRun run_distributed_lwcs(const std::vector<Partition>& partitions, std::size_t m,
                                    std::uint64_t seed, const Divergence& div) {
    if (partitions.empty()) throw std::invalid_argument("run_distributed_lwcs: no partitions");
    if (!mahalanobis_companion(div).is_diagonal())
        throw ConfigError(
            "distributed construction needs a diagonal companion matrix "
            "(summary statistics carry no cross moments)");
    if (div.has_domain_box()) {
        for (const Partition& p : partitions) {
            const DomainReport rep = validate_domain(div, Dataset{p.points});
            if (!rep.ok)
                throw DomainError("machine " + std::to_string(p.machine_id) + " holds a point at row " +
                                      std::to_string(rep.row) + ", column " + std::to_string(rep.column) +
                                      " outside the divergence domain",
                                  rep.column, rep.value);
        }
    }

    DistributedRun run;

    // Round 1: every worker ships its summary; order on the wire is whatever
    // the callers produced.
    for (const Partition& p : partitions)
        run.mailbox.summaries.push_back({p.machine_id, summarize_partition(p)});

    run.stats = merge_summaries(run.mailbox.summaries, div);
    run.allocation = allocate_samples(run.stats, m, seed);

    // Round 2: the coordinator requests only from machines that owe samples.
    const std::size_t p_count = run.stats.machine_ids.size();
    for (std::size_t i = 0; i < p_count; ++i) {
        const std::size_t u = run.allocation.uniform_counts[i];
        const std::size_t v = run.allocation.nonuniform_counts[i];
        if (u + v > 0) run.mailbox.requests.push_back({run.stats.machine_ids[i], u, v});
    }
    for (const SampleRequest& req : run.mailbox.requests) {
        const auto it = std::find_if(partitions.begin(), partitions.end(), [&](const Partition& p) {
            return p.machine_id == req.machine_id;
        });
        run.mailbox.replies.push_back(
            partition_sample(*it, run.stats, req.uniform_count, req.nonuniform_count, seed, m, div));
    }

    // Merge replies in machine order; weights already carry the global q.
    std::sort(run.mailbox.replies.begin(), run.mailbox.replies.end(),
              [](const SampleReply& a, const SampleReply& b) { return a.machine_id < b.machine_id; });
    run.coreset.points = Matrix(0, partitions.front().points.cols());
    for (const SampleReply& reply : run.mailbox.replies) {
        for (std::size_t r = 0; r < reply.points.rows(); ++r) {
            run.coreset.points.push_row(reply.points.row(r));
            run.coreset.weights.push_back(reply.weights[r]);
        }
    }
    return run;
}

Coreset distributed_lightweight_coreset(const std::vector<Partition>& partitions, std::size_t m,
                                        std::uint64_t seed, const Divergence& div) {
    return run_distributed_lwcs(partitions, m, seed, div).coreset;
}

}  // namespace corekit
