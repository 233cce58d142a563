#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "corekit/divergence.hpp"
#include "corekit/sampling.hpp"
#include "corekit/types.hpp"

namespace corekit {

struct Partition {
    std::uint64_t machine_id = 0;
    Matrix points;
};

struct PartitionSummary {
    std::size_t count = 0;
    std::vector<double> coord_sums;     // U_j = sum of x_j
    std::vector<double> coord_sq_sums;  // V_j = sum of x_j^2
};

struct GlobalStats {
    std::vector<double> mean;
    std::vector<std::uint64_t> machine_ids;  // ascending
    std::vector<std::size_t> counts;         // aligned with machine_ids
    std::vector<double> per_partition_central_cost;
    double total_central_cost = 0.0;
    std::size_t total_count = 0;
};

struct SampleAllocation {
    std::vector<std::size_t> uniform_counts;     // u_i, aligned with machine_ids
    std::vector<std::size_t> nonuniform_counts;  // v_i
};

// Round-trip message structs: the simulation's coordinator and workers only
// talk through these, keeping a seam for a networked transport.
struct SummaryMessage {
    std::uint64_t machine_id = 0;
    PartitionSummary summary;
};

struct SampleRequest {
    std::uint64_t machine_id = 0;
    std::size_t uniform_count = 0;
    std::size_t nonuniform_count = 0;
};

struct SampleReply {
    std::uint64_t machine_id = 0;
    Matrix points;
    std::vector<double> weights;
    std::size_t data_passes = 0;  // full scans of the partition in round 2
};

struct Mailbox {
    std::vector<SummaryMessage> summaries;
    std::vector<SampleRequest> requests;
    std::vector<SampleReply> replies;
};

struct DistributedRun {
    Coreset coreset;
    GlobalStats stats;
    SampleAllocation allocation;
    Mailbox mailbox;
};

enum class PartitionStrategy { round_robin, contiguous };
PartitionStrategy partition_strategy_from_string(const std::string& name);

std::vector<Partition> partition_dataset(const Dataset& x, std::size_t machines,
                                         PartitionStrategy strategy);

// Round 1, worker side: one pass over the partition.
PartitionSummary summarize_partition(const Partition& p);

// Coordinator: global mean and the per-partition phi_{X_i}({mu}) identity.
// Message order does not matter; summaries are combined by ascending
// machine_id so the result is bitwise reproducible.
GlobalStats merge_summaries(const std::vector<SummaryMessage>& summaries, const Divergence& div);

// Coordinator: m two-stage draws (component, then machine) deciding how many
// uniform and distance-proportional samples each machine owes.
SampleAllocation allocate_samples(const GlobalStats& g, std::size_t m, std::uint64_t seed);

// Round 2, worker side: u uniform and v distance-proportional local draws,
// each weighted by the global Algorithm-1 probability.
SampleReply partition_sample(const Partition& p, const GlobalStats& g, std::size_t u,
                             std::size_t v, std::uint64_t seed, std::size_t m,
                             const Divergence& div);

DistributedRun run_distributed_lwcs(const std::vector<Partition>& partitions, std::size_t m,
                                    std::uint64_t seed, const Divergence& div);

Coreset distributed_lightweight_coreset(const std::vector<Partition>& partitions, std::size_t m,
                                        std::uint64_t seed, const Divergence& div);

}  // namespace corekit
