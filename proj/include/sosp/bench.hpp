#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sosp/baselines.hpp"
#include "sosp/oracle.hpp"
#include "sosp/scenario.hpp"

namespace sosp {

struct WelchResult {
    double t = 0.0;
    bool significant = false;
};

/// One-tailed Welch's t-test of mean(a) > mean(b) at the 0.05 level, with
/// Welch-Satterthwaite degrees of freedom. Uses a built-in critical-value
/// table up to 30 degrees of freedom and the normal approximation beyond.
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

/// (profit / consumed memory, profit / consumed energy), summed over
/// orbits. An empty schedule reports (0, 0).
std::pair<double, double> resource_ratios(const Schedule& schedule, const Instance& instance);

enum class Algorithm { ASA_DTC, ASA_STC, ASA_NONTC, CLASSIC_SA, HPFS, ORACLE };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

struct ExperimentConfig {
    std::optional<GeneratorConfig> generator;     // either this ...
    std::optional<std::string> scenario_file;     // ... or this
    std::vector<Algorithm> algorithms;
    int replicas = 50;
    std::uint64_t base_seed = 1;
    std::optional<Algorithm> reference;           // IMP/t-test baseline
    std::optional<long long> max_itr;             // override the 200*N default
    double classic_lambda0 = 5.0;
    double classic_gamma = 0.999;
    OracleLimits oracle_limits;
    int jobs = 0;  // worker threads; 0 = hardware concurrency
};

ExperimentConfig load_experiment_config_file(const std::string& path);

struct ReplicaOutcome {
    int replica = 0;
    std::uint64_t seed = 0;
    long long profit = 0;
    int finished_tasks = 0;  // distinct initial tasks
    double consumed_energy = 0.0;
    double consumed_memory = 0.0;
    double profit_memory_ratio = 0.0;
    double profit_energy_ratio = 0.0;
    double wall_seconds = 0.0;
};

struct ResultRow {
    Algorithm algorithm;
    bool available = true;  // false when the oracle refused the instance
    int replicas = 0;
    double mean_profit = 0.0;
    double mean_finished = 0.0;
    double sd_profit = 0.0;
    double mean_wall_seconds = 0.0;
    double profit_memory_ratio = 0.0;
    double profit_energy_ratio = 0.0;
    double imp_vs_reference = 0.0;
    double t_stat = 0.0;
    bool significant = false;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<std::pair<Algorithm, std::vector<ReplicaOutcome>>> replicas;

    /// Deterministic artifacts (no wall-clock columns).
    std::string summary_csv() const;
    std::string replica_csv() const;
    std::string summary_table(bool with_time) const;
};

/// Runs every configured algorithm for the configured number of replicas
/// (seed = base_seed + replica index) and aggregates the statistics.
/// Replicas may run on worker threads; outputs are byte-identical either
/// way. An over-limit oracle request yields an unavailable row instead of
/// an error.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace sosp
