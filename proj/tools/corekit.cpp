#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corekit/accumulate.hpp"
#include "corekit/core.hpp"
#include "corekit/csv.hpp"
#include "corekit/distributed.hpp"
#include "corekit/divergence.hpp"
#include "corekit/evaluation.hpp"
#include "corekit/sampling.hpp"
#include "corekit/solver.hpp"
#include "corekit/synth.hpp"

namespace {

using corekit::ConfigError;
using json = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct DivergenceOptions {
    std::string kind = "squared_euclidean";
    double domain_lo = 0.1;
    double domain_hi = 10.0;
    std::string companion_file;
    double mu_sim = 0.0;
};

void add_divergence_flags(CLI::App* cmd, DivergenceOptions& opts) {
    cmd->add_option("--divergence", opts.kind,
                    "Divergence kind: squared_euclidean|squared_mahalanobis|generalized_kl|itakura_saito")
        ->capture_default_str();
    cmd->add_option("--domain-lo", opts.domain_lo, "Domain box lower bound (KL / Itakura-Saito)")
        ->capture_default_str();
    cmd->add_option("--domain-hi", opts.domain_hi, "Domain box upper bound (KL / Itakura-Saito)")
        ->capture_default_str();
    cmd->add_option("--companion-file", opts.companion_file,
                    "CSV with a square SPD matrix: the companion A (required for "
                    "squared_mahalanobis, optional override elsewhere)");
    cmd->add_option("--mu-sim", opts.mu_sim,
                    "Similarity constant in (0,1] accompanying --companion-file overrides");
}

corekit::Divergence build_divergence(const DivergenceOptions& opts) {
    using corekit::Divergence;
    const corekit::DivergenceKind kind = corekit::divergence_kind_from_string(opts.kind);
    Divergence div = Divergence::squared_euclidean();
    switch (kind) {
        case corekit::DivergenceKind::squared_euclidean:
            break;
        case corekit::DivergenceKind::squared_mahalanobis: {
            if (opts.companion_file.empty())
                throw ConfigError("squared_mahalanobis needs --companion-file");
            div = Divergence::squared_mahalanobis(corekit::load_dataset(opts.companion_file).points);
            return div;
        }
        case corekit::DivergenceKind::generalized_kl:
            div = Divergence::generalized_kl(opts.domain_lo, opts.domain_hi);
            break;
        case corekit::DivergenceKind::itakura_saito:
            div = Divergence::itakura_saito(opts.domain_lo, opts.domain_hi);
            break;
    }
    if (!opts.companion_file.empty()) {
        if (!(opts.mu_sim > 0.0))
            throw ConfigError("--companion-file override needs --mu-sim in (0,1]");
        div.override_companion(corekit::load_dataset(opts.companion_file).points, opts.mu_sim);
    }
    return div;
}

int threads_flag = 1;

void add_threads_flag(CLI::App* cmd) {
    cmd->add_option("--threads", threads_flag, "Worker thread cap (never changes results)")
        ->envname("COREKIT_THREADS")
        ->capture_default_str();
}

// Input files starting with the coreset header load as weighted points.
bool looks_like_coreset(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    return in && std::getline(in, line) && line.rfind("# lwcs", 0) == 0;
}

corekit::Coreset construct_summary(const corekit::Dataset& x, corekit::SummaryMethod method,
                                   const corekit::SamplerConfig& cfg, std::size_t k,
                                   const corekit::Divergence& div) {
    switch (method) {
        case corekit::SummaryMethod::lwcs: return corekit::lightweight_coreset(x, cfg, div);
        case corekit::SummaryMethod::uniform: return corekit::uniform_coreset(x, cfg);
        case corekit::SummaryMethod::cs: return corekit::sensitivity_coreset(x, cfg, k, div);
        case corekit::SummaryMethod::full: break;
    }
    throw ConfigError("construct: method must be one of uniform|lwcs|cs");
}

void emit(const json& record) { std::cout << record.dump(2) << '\n'; }

// CLI11 only consults config files registered on the root app, so each
// subcommand takes a plain --config option holding flat key=value pairs and we
// replay the file into whichever options the command line left untouched.
void apply_flat_config(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    try {
        const std::vector<CLI::ConfigItem> items = cmd->get_config_formatter()->from_file(path);
        for (const CLI::ConfigItem& item : items) {
            if (!item.parents.empty())
                throw ConfigError("config: flat key=value entries only, got " + item.fullname());
            CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
            if (opt == nullptr) throw ConfigError("config: unknown key " + item.name);
            if (opt->count() > 0) continue;  // explicit flags win
            for (const std::string& value : item.inputs) opt->add_result(value);
            opt->run_callback();
        }
    } catch (const CLI::Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

struct ConstructOptions {
    std::string input, output = "coreset.csv", method = "lwcs";
    std::size_t m = 1000, k = 1;
    std::uint64_t seed = 0;
    bool merge_duplicates = false;
    std::string config;
    DivergenceOptions div;
};

int run_construct(const ConstructOptions& opts) {
    if (opts.m == 0) throw ConfigError("--m must be >= 1");
    if (opts.k == 0) throw ConfigError("--k must be >= 1");
    const corekit::Dataset x = corekit::load_dataset(opts.input);
    const corekit::Divergence div = build_divergence(opts.div);
    const corekit::SummaryMethod method = corekit::summary_method_from_string(opts.method);
    corekit::SamplerConfig cfg;
    cfg.m = opts.m;
    cfg.seed = opts.seed;
    cfg.k = opts.k;

    const auto t0 = clock_type::now();
    corekit::Coreset c = construct_summary(x, method, cfg, opts.k, div);
    const double construct_seconds = seconds_since(t0);
    if (opts.merge_duplicates) c = corekit::merge_duplicate_points(c);
    corekit::save_coreset(opts.output, c, x.n(), opts.seed);

    json record;
    record["schema"] = "v1";
    record["command"] = "construct";
    record["input"] = opts.input;
    record["output"] = opts.output;
    record["method"] = opts.method;
    record["n"] = x.n();
    record["d"] = x.dim();
    record["m"] = c.size();
    record["seed"] = opts.seed;
    record["merge_duplicates"] = opts.merge_duplicates;
    record["total_weight"] = c.total_weight();
    record["construct_seconds"] = construct_seconds;
    emit(record);
    return 0;
}

struct SolveOptions {
    std::string input, output = "centers.csv";
    std::size_t k = 1, max_iters = 100, restarts = 1;
    double rel_tol = 1e-4;
    std::uint64_t seed = 0;
    bool seeding_only = false;
    std::string config;
    DivergenceOptions div;
};

int run_solve(const SolveOptions& opts) {
    if (opts.k == 0) throw ConfigError("--k must be >= 1");
    if (opts.restarts == 0) throw ConfigError("--restarts must be >= 1");
    const corekit::Divergence div = build_divergence(opts.div);
    corekit::SolveConfig cfg;
    cfg.k = opts.k;
    cfg.seed = opts.seed;
    cfg.max_iters = opts.max_iters;
    cfg.rel_tol = opts.rel_tol;
    cfg.restarts = opts.restarts;
    cfg.seeding_only = opts.seeding_only;

    corekit::Dataset x;
    corekit::Coreset c;
    bool weighted = looks_like_coreset(opts.input);
    if (weighted)
        c = corekit::load_coreset(opts.input).coreset;
    else
        x = corekit::load_dataset(opts.input);
    const corekit::PointsView view = weighted ? corekit::PointsView(c) : corekit::PointsView(x);

    const auto t0 = clock_type::now();
    const corekit::SolveResult result = corekit::solve_kmeans(view, cfg, div);
    const double seconds = seconds_since(t0);
    corekit::save_centers(opts.output, result.centers);

    json record;
    record["schema"] = "v1";
    record["command"] = "solve";
    record["input"] = opts.input;
    record["output"] = opts.output;
    record["weighted_input"] = weighted;
    record["k"] = opts.k;
    record["seed"] = opts.seed;
    record["restarts"] = opts.restarts;
    record["seeding_only"] = opts.seeding_only;
    record["cost"] = result.cost;
    record["iters"] = result.iters;
    record["seconds"] = seconds;
    emit(record);
    return 0;
}

struct BenchOptions {
    std::string input, json_out = "results.json", csv_out = "results.csv";
    std::vector<std::string> methods{"uniform", "lwcs", "cs"};
    std::vector<std::size_t> m_grid{1000};
    std::vector<std::size_t> k_grid{10};
    std::size_t repeats = 50, max_iters = 100, restarts = 1;
    double rel_tol = 1e-4;
    std::uint64_t seed = 0;
    bool seeding_only = false;
    std::string config;
    DivergenceOptions div;
};

int run_bench(const BenchOptions& opts) {
    const corekit::Dataset x = corekit::load_dataset(opts.input);
    const corekit::Divergence div = build_divergence(opts.div);
    corekit::BenchmarkConfig cfg;
    for (const auto& name : opts.methods)
        cfg.methods.push_back(corekit::summary_method_from_string(name));
    cfg.m_grid = opts.m_grid;
    cfg.k_grid = opts.k_grid;
    cfg.repeats = opts.repeats;
    cfg.seed = opts.seed;
    cfg.max_iters = opts.max_iters;
    cfg.rel_tol = opts.rel_tol;
    cfg.restarts = opts.restarts;
    cfg.seeding_only = opts.seeding_only;

    const auto t0 = clock_type::now();
    const std::vector<corekit::BenchmarkResult> results = corekit::benchmark(x, cfg, div);
    const double seconds = seconds_since(t0);
    const std::vector<corekit::BenchmarkSummary> summary = corekit::summarize_benchmark(results);

    json doc;
    doc["schema"] = "v1";
    doc["command"] = "bench";
    doc["input"] = opts.input;
    doc["n"] = x.n();
    doc["d"] = x.dim();
    doc["repeats"] = opts.repeats;
    doc["seed"] = opts.seed;
    doc["eta_reference"] = "seed-matched full run per (k, repeat)";
    doc["results"] = json::array();
    for (const auto& row : results) {
        json r;
        r["method"] = to_string(row.method);
        r["k"] = row.k;
        r["m"] = row.m;
        r["seed"] = row.seed;
        r["eta"] = row.relative_error;
        r["construct_seconds"] = row.construct_seconds;
        r["solve_seconds"] = row.solve_seconds;
        r["speedup"] = row.speedup;
        doc["results"].push_back(std::move(r));
    }
    doc["summary"] = json::array();
    for (const auto& s : summary) {
        json r;
        r["method"] = to_string(s.method);
        r["k"] = s.k;
        r["m"] = s.m;
        r["repeats"] = s.repeats;
        r["eta_mean"] = s.eta_mean;
        r["eta_ci95"] = s.eta_ci95;
        r["construct_seconds"] = s.construct_mean;
        r["solve_seconds"] = s.solve_mean;
        r["speedup"] = s.speedup_mean;
        doc["summary"].push_back(std::move(r));
    }
    std::ofstream jout(opts.json_out);
    if (!jout) throw std::runtime_error("cannot write " + opts.json_out);
    jout << doc.dump(2) << '\n';

    std::ofstream cout_file(opts.csv_out);
    if (!cout_file) throw std::runtime_error("cannot write " + opts.csv_out);
    cout_file << "method,k,m,seed,eta,construct_s,solve_s\n";
    for (const auto& row : results) {
        cout_file << to_string(row.method) << ',' << row.k << ',' << row.m << ',' << row.seed
                  << ',' << corekit::format_double(row.relative_error) << ','
                  << corekit::format_double(row.construct_seconds) << ','
                  << corekit::format_double(row.solve_seconds) << '\n';
    }

    json record;
    record["schema"] = "v1";
    record["command"] = "bench";
    record["results_json"] = opts.json_out;
    record["results_csv"] = opts.csv_out;
    record["cells"] = results.size();
    record["seconds"] = seconds;
    emit(record);
    return 0;
}

struct DistributedOptions {
    std::string input, output = "coreset.csv", strategy = "round_robin";
    std::size_t partitions = 2, m = 1000;
    std::uint64_t seed = 0;
    std::string config;
    DivergenceOptions div;
};

int run_distributed(const DistributedOptions& opts) {
    if (opts.m == 0) throw ConfigError("--m must be >= 1");
    if (opts.partitions == 0) throw ConfigError("--partitions must be >= 1");
    const corekit::Dataset x = corekit::load_dataset(opts.input);
    const corekit::Divergence div = build_divergence(opts.div);
    const std::vector<corekit::Partition> parts = corekit::partition_dataset(
        x, opts.partitions, corekit::partition_strategy_from_string(opts.strategy));

    const auto t0 = clock_type::now();
    const corekit::DistributedRun run = corekit::run_distributed_lwcs(parts, opts.m, opts.seed, div);
    const double seconds = seconds_since(t0);
    corekit::save_coreset(opts.output, run.coreset, x.n(), opts.seed);

    json record;
    record["schema"] = "v1";
    record["command"] = "distributed-sim";
    record["input"] = opts.input;
    record["output"] = opts.output;
    record["partitions"] = opts.partitions;
    record["strategy"] = opts.strategy;
    record["m"] = opts.m;
    record["seed"] = opts.seed;
    record["total_count"] = run.stats.total_count;
    record["total_central_cost"] = run.stats.total_central_cost;
    record["mean"] = run.stats.mean;
    record["machines"] = json::array();
    for (std::size_t i = 0; i < run.stats.machine_ids.size(); ++i) {
        json machine;
        machine["machine_id"] = run.stats.machine_ids[i];
        machine["count"] = run.stats.counts[i];
        machine["central_cost"] = run.stats.per_partition_central_cost[i];
        machine["uniform_draws"] = run.allocation.uniform_counts[i];
        machine["nonuniform_draws"] = run.allocation.nonuniform_counts[i];
        std::size_t round2 = 0;
        for (const auto& reply : run.mailbox.replies)
            if (reply.machine_id == run.stats.machine_ids[i]) round2 = reply.data_passes;
        machine["data_passes"] = 1 + round2;  // summary pass + optional sampling pass
        record["machines"].push_back(std::move(machine));
    }
    record["seconds"] = seconds;
    emit(record);
    return 0;
}

struct StatOptions {
    std::string gen = "gaussian", method = "lwcs", json_out;
    std::size_t dim = 1, n = 1000, m = 100, k = 2, truth_samples = 1000000, probes = 16;
    std::uint64_t seed = 0;
    double target_epsilon = 0.5;
    double contamination_fraction = 0.01, contamination_distance = 100.0,
           contamination_sigma = 1.0, tail_exponent = 0.0;
    std::string config;
    DivergenceOptions div;
};

int run_stat(const StatOptions& opts) {
    if (opts.m == 0 || opts.n == 0 || opts.k == 0 || opts.truth_samples == 0 || opts.probes == 0)
        throw ConfigError("--n, --m, --k, --truth-samples, --probes must all be >= 1");
    corekit::GeneratorSpec gen = corekit::generator_from_string(opts.gen, opts.dim);
    if (gen.kind == corekit::GeneratorSpec::Kind::heavy_tail_contaminated) {
        gen.contamination_fraction = opts.contamination_fraction;
        gen.contamination_distance = opts.contamination_distance;
        gen.contamination_sigma = opts.contamination_sigma;
        gen.tail_exponent = opts.tail_exponent;
    }
    const corekit::Divergence div = build_divergence(opts.div);
    corekit::ERMConfig cfg;
    cfg.n = opts.n;
    cfg.m = opts.m;
    cfg.k = opts.k;
    cfg.seed = opts.seed;
    cfg.method = corekit::summary_method_from_string(opts.method);
    cfg.target_epsilon = opts.target_epsilon;
    cfg.truth_samples = opts.truth_samples;
    cfg.probe_count = opts.probes;

    const auto t0 = clock_type::now();
    const corekit::ERMReport report = corekit::erm_experiment(gen, cfg, div);
    const double seconds = seconds_since(t0);

    json record;
    record["schema"] = "v1";
    record["command"] = "stat-experiment";
    record["generator"] = opts.gen;
    record["dim"] = opts.dim;
    record["method"] = opts.method;
    record["n"] = report.n;
    record["m"] = report.m;
    record["k"] = report.k;
    record["seed"] = opts.seed;
    record["truth_samples"] = report.truth_samples;
    record["probes"] = report.probes;
    record["kurtosis"] = report.kurtosis_estimate;
    record["kurtosis_reliable"] = report.kurtosis_reliable;
    record["variance"] = report.variance_estimate;
    record["fourth_moment"] = report.fourth_moment_estimate;
    record["erm_epsilon"] = report.erm_epsilon;
    record["target_epsilon"] = report.target_epsilon;
    record["violation_fraction"] = report.violation_fraction;
    record["seconds"] = seconds;
    if (!opts.json_out.empty()) {
        std::ofstream out(opts.json_out);
        if (!out) throw std::runtime_error("cannot write " + opts.json_out);
        out << record.dump(2) << '\n';
    }
    emit(record);
    return 0;
}

struct CheckOptions {
    std::string input, coreset;
    std::size_t probes = 200, k = 3;
    std::uint64_t seed = 0;
    std::string config;
    DivergenceOptions div;
};

int run_check(const CheckOptions& opts) {
    if (opts.probes == 0 || opts.k == 0) throw ConfigError("--probes and --k must be >= 1");
    const corekit::Dataset x = corekit::load_dataset(opts.input);
    const corekit::CoresetFile file = corekit::load_coreset(opts.coreset);
    const corekit::Divergence div = build_divergence(opts.div);

    const auto t0 = clock_type::now();
    const corekit::PropertyReport report =
        corekit::estimate_required_epsilon(x, file.coreset, opts.probes, opts.seed, div, opts.k);
    const double seconds = seconds_since(t0);

    json record;
    record["schema"] = "v1";
    record["command"] = "check";
    record["input"] = opts.input;
    record["coreset"] = opts.coreset;
    record["coreset_m"] = file.m;
    record["coreset_seed"] = file.seed;
    record["k"] = opts.k;
    record["seed"] = opts.seed;
    record["probes"] = report.probes;
    record["max_margin"] = report.max_margin;
    record["argmax_probe"] = json::array();
    for (std::size_t i = 0; i < report.argmax_probe.centers.rows(); ++i) {
        const auto row = report.argmax_probe.centers.row(i);
        record["argmax_probe"].push_back(std::vector<double>(row.begin(), row.end()));
    }
    record["seconds"] = seconds;
    emit(record);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corekit: lightweight-coreset construction, clustering, and evaluation"};
    app.require_subcommand(1);

    ConstructOptions construct_opts;
    CLI::App* construct = app.add_subcommand("construct", "Build a weighted summary of a dataset");
    construct->add_option("--config", construct_opts.config, "Flat key=value defaults; explicit flags win");
    construct->add_option("--input", construct_opts.input, "Dataset CSV (no header)")->required();
    construct->add_option("--output", construct_opts.output, "Coreset CSV path")->capture_default_str();
    construct->add_option("--method", construct_opts.method, "uniform|lwcs|cs")->capture_default_str();
    construct->add_option("--m", construct_opts.m, "Summary size")->capture_default_str();
    construct->add_option("--k", construct_opts.k, "Target center count (cs seeding size)")
        ->capture_default_str();
    construct->add_option("--seed", construct_opts.seed, "Base seed")->capture_default_str();
    construct->add_flag("--merge-duplicates", construct_opts.merge_duplicates,
                        "Merge equal points by summing weights");
    add_divergence_flags(construct, construct_opts.div);
    add_threads_flag(construct);

    SolveOptions solve_opts;
    CLI::App* solve = app.add_subcommand("solve", "Weighted k-means++ (+ Lloyd) on a dataset or coreset");
    solve->add_option("--config", solve_opts.config, "Flat key=value defaults; explicit flags win");
    solve->add_option("--input", solve_opts.input, "Dataset CSV or coreset CSV (auto-detected)")
        ->required();
    solve->add_option("--output", solve_opts.output, "Centers CSV path")->capture_default_str();
    solve->add_option("--k", solve_opts.k, "Center count")->required();
    solve->add_option("--seed", solve_opts.seed, "Base seed")->capture_default_str();
    solve->add_option("--max-iters", solve_opts.max_iters, "Lloyd iteration cap")->capture_default_str();
    solve->add_option("--rel-tol", solve_opts.rel_tol, "Relative improvement stop threshold")
        ->capture_default_str();
    solve->add_option("--restarts", solve_opts.restarts, "Independent restarts, best kept")
        ->capture_default_str();
    solve->add_flag("--seeding-only", solve_opts.seeding_only, "Skip Lloyd refinement");
    add_divergence_flags(solve, solve_opts.div);
    add_threads_flag(solve);

    BenchOptions bench_opts;
    CLI::App* bench = app.add_subcommand("bench", "Method x m x k benchmark grid with seed-matched full runs");
    bench->add_option("--config", bench_opts.config, "Flat key=value defaults; explicit flags win");
    bench->add_option("--input", bench_opts.input, "Dataset CSV")->required();
    bench->add_option("--methods", bench_opts.methods, "Comma list of uniform|lwcs|cs|full")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--m", bench_opts.m_grid, "Comma list of summary sizes")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--k", bench_opts.k_grid, "Comma list of center counts")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--repeats", bench_opts.repeats, "Seeds per cell")->capture_default_str();
    bench->add_option("--seed", bench_opts.seed, "Base seed")->capture_default_str();
    bench->add_option("--max-iters", bench_opts.max_iters, "Lloyd iteration cap")->capture_default_str();
    bench->add_option("--rel-tol", bench_opts.rel_tol, "Relative improvement stop threshold")
        ->capture_default_str();
    bench->add_option("--restarts", bench_opts.restarts, "Restarts per solve")->capture_default_str();
    bench->add_flag("--seeding-only", bench_opts.seeding_only, "Skip Lloyd refinement");
    bench->add_option("--json-out", bench_opts.json_out, "Results JSON path")->capture_default_str();
    bench->add_option("--csv-out", bench_opts.csv_out, "Tidy results CSV path")->capture_default_str();
    add_divergence_flags(bench, bench_opts.div);
    add_threads_flag(bench);

    DistributedOptions dist_opts;
    CLI::App* dist = app.add_subcommand("distributed-sim",
                                        "Two-round distributed lightweight-coreset simulation");
    dist->add_option("--config", dist_opts.config, "Flat key=value defaults; explicit flags win");
    dist->add_option("--input", dist_opts.input, "Dataset CSV")->required();
    dist->add_option("--output", dist_opts.output, "Coreset CSV path")->capture_default_str();
    dist->add_option("--partitions", dist_opts.partitions, "Machine count")->capture_default_str();
    dist->add_option("--strategy", dist_opts.strategy, "round_robin|contiguous")->capture_default_str();
    dist->add_option("--m", dist_opts.m, "Summary size")->capture_default_str();
    dist->add_option("--seed", dist_opts.seed, "Base seed")->capture_default_str();
    add_divergence_flags(dist, dist_opts.div);
    add_threads_flag(dist);

    StatOptions stat_opts;
    CLI::App* stat = app.add_subcommand("stat-experiment",
                                        "Statistical (ERM) experiment against a known generator");
    stat->add_option("--config", stat_opts.config, "Flat key=value defaults; explicit flags win");
    stat->add_option("--gen", stat_opts.gen, "gaussian|contaminated")->capture_default_str();
    stat->add_option("--dim", stat_opts.dim, "Generator dimension")->capture_default_str();
    stat->add_option("--n", stat_opts.n, "Sample size drawn from the generator")->capture_default_str();
    stat->add_option("--m", stat_opts.m, "Summary size")->capture_default_str();
    stat->add_option("--k", stat_opts.k, "Probe center count")->capture_default_str();
    stat->add_option("--seed", stat_opts.seed, "Base seed")->capture_default_str();
    stat->add_option("--method", stat_opts.method, "uniform|lwcs|cs|full")->capture_default_str();
    stat->add_option("--truth-samples", stat_opts.truth_samples, "Ground-truth proxy sample size")
        ->capture_default_str();
    stat->add_option("--probes", stat_opts.probes, "Probe count")->capture_default_str();
    stat->add_option("--target-epsilon", stat_opts.target_epsilon,
                     "Margin level for the violation fraction")
        ->capture_default_str();
    stat->add_option("--contamination-fraction", stat_opts.contamination_fraction,
                     "Contaminated generator: far-mass fraction")
        ->capture_default_str();
    stat->add_option("--contamination-distance", stat_opts.contamination_distance,
                     "Contaminated generator: blob distance")
        ->capture_default_str();
    stat->add_option("--contamination-sigma", stat_opts.contamination_sigma,
                     "Contaminated generator: blob spread")
        ->capture_default_str();
    stat->add_option("--tail-exponent", stat_opts.tail_exponent,
                     "Pareto radial exponent (0 = fixed radius)")
        ->capture_default_str();
    stat->add_option("--json-out", stat_opts.json_out, "Optional report JSON path");
    add_divergence_flags(stat, stat_opts.div);
    add_threads_flag(stat);

    CheckOptions check_opts;
    CLI::App* check = app.add_subcommand("check", "Estimate the coreset's empirical epsilon");
    check->add_option("--config", check_opts.config, "Flat key=value defaults; explicit flags win");
    check->add_option("--input", check_opts.input, "Dataset CSV")->required();
    check->add_option("--coreset", check_opts.coreset, "Coreset CSV")->required();
    check->add_option("--probes", check_opts.probes, "Probe count")->capture_default_str();
    check->add_option("--k", check_opts.k, "Probe center count")->capture_default_str();
    check->add_option("--seed", check_opts.seed, "Probe seed")->capture_default_str();
    add_divergence_flags(check, check_opts.div);
    add_threads_flag(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*construct) apply_flat_config(construct, construct_opts.config);
        if (*solve) apply_flat_config(solve, solve_opts.config);
        if (*bench) apply_flat_config(bench, bench_opts.config);
        if (*dist) apply_flat_config(dist, dist_opts.config);
        if (*stat) apply_flat_config(stat, stat_opts.config);
        if (*check) apply_flat_config(check, check_opts.config);
        corekit::set_max_threads(threads_flag);
        if (*construct) return run_construct(construct_opts);
        if (*solve) return run_solve(solve_opts);
        if (*bench) return run_bench(bench_opts);
        if (*dist) return run_distributed(dist_opts);
        if (*stat) return run_stat(stat_opts);
        if (*check) return run_check(check_opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
