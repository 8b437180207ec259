#include "sosp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace sosp {

namespace {

double sample_mean(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double sum = 0.0;
    for (double x : xs) sum += (x - mean) * (x - mean);
    return sum / static_cast<double>(xs.size() - 1);
}

// One-tailed critical values of Student's t at the 0.05 level, df 1..30.
constexpr double kCriticalT[31] = {
    0.0,    6.3138, 2.9200, 2.3534, 2.1318, 2.0150, 1.9432, 1.8946, 1.8595, 1.8331, 1.8125,
    1.7959, 1.7823, 1.7709, 1.7613, 1.7531, 1.7459, 1.7396, 1.7341, 1.7291, 1.7247, 1.7207,
    1.7171, 1.7139, 1.7109, 1.7081, 1.7056, 1.7033, 1.7011, 1.6991, 1.6973};

double critical_value(double df) {
    if (df >= 30.0) return 1.6449;  // normal approximation
    const int idx = std::max(1, static_cast<int>(df));
    return kCriticalT[std::min(idx, 30)];
}

}  // namespace

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw ArgumentError("welch_t: each sample needs at least two values");
    const double mean_a = sample_mean(a);
    const double mean_b = sample_mean(b);
    const double var_a = sample_variance(a, mean_a);
    const double var_b = sample_variance(b, mean_b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());

    const double pooled = var_a / na + var_b / nb;
    if (pooled <= 0.0) {
        if (mean_a == mean_b) return {0.0, false};
        const double t = mean_a > mean_b ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity();
        return {t, mean_a > mean_b};
    }
    const double t = (mean_a - mean_b) / std::sqrt(pooled);
    const double df = pooled * pooled /
                      (var_a * var_a / (na * na * (na - 1)) + var_b * var_b / (nb * nb * (nb - 1)));
    return {t, t > critical_value(df)};
}

std::pair<double, double> resource_ratios(const Schedule& schedule, const Instance& instance) {
    const long long profit = objective(schedule, instance);
    const OrbitUsage usage = total_usage(schedule, instance);
    const double pm = usage.memory > 0 ? static_cast<double>(profit) / usage.memory : 0.0;
    const double pe = usage.energy > 0 ? static_cast<double>(profit) / usage.energy : 0.0;
    return {pm, pe};
}

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::ASA_DTC: return "ASA-DTC";
        case Algorithm::ASA_STC: return "ASA-STC";
        case Algorithm::ASA_NONTC: return "ASA-NONTC";
        case Algorithm::CLASSIC_SA: return "CLASSIC-SA";
        case Algorithm::HPFS: return "HPFS";
        case Algorithm::ORACLE: return "ORACLE";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
    for (Algorithm a : {Algorithm::ASA_DTC, Algorithm::ASA_STC, Algorithm::ASA_NONTC,
                        Algorithm::CLASSIC_SA, Algorithm::HPFS, Algorithm::ORACLE})
        if (to_string(a) == name) return a;
    throw ArgumentError("unknown algorithm: " + name);
}

ExperimentConfig load_experiment_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("experiment config: expected an object");
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        static const char* known[] = {"format",   "scenario_file", "generator", "algorithms",
                                      "replicas", "base_seed",     "reference", "max_itr",
                                      "classic_lambda0", "classic_gamma", "oracle_limits", "jobs"};
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return it.key() == k; }) == std::end(known))
            throw ParseError("experiment config: unknown key '" + it.key() + "'");
    }
    if (doc.contains("format") && doc["format"] != 1)
        throw ParseError("experiment config: unsupported format (expected 1)");

    ExperimentConfig config;
    if (doc.contains("scenario_file")) config.scenario_file = doc["scenario_file"].get<std::string>();
    if (doc.contains("generator")) {
        std::stringstream buffer(doc["generator"].dump());
        config.generator = load_generator_config(buffer);
    }
    if (!config.scenario_file && !config.generator)
        throw ParseError("experiment config: needs 'scenario_file' or 'generator'");
    if (config.scenario_file && config.generator)
        throw ParseError("experiment config: give either 'scenario_file' or 'generator', not both");

    if (!doc.contains("algorithms") || !doc["algorithms"].is_array() || doc["algorithms"].empty())
        throw ParseError("experiment config: 'algorithms' must be a non-empty array");
    for (const auto& name : doc["algorithms"])
        config.algorithms.push_back(algorithm_from_string(name.get<std::string>()));

    if (doc.contains("replicas")) config.replicas = doc["replicas"].get<int>();
    if (config.replicas < 1) throw ParseError("experiment config: replicas must be >= 1");
    if (doc.contains("base_seed")) config.base_seed = doc["base_seed"].get<std::uint64_t>();
    if (doc.contains("reference"))
        config.reference = algorithm_from_string(doc["reference"].get<std::string>());
    if (doc.contains("max_itr")) config.max_itr = doc["max_itr"].get<long long>();
    if (doc.contains("classic_lambda0")) config.classic_lambda0 = doc["classic_lambda0"].get<double>();
    if (doc.contains("classic_gamma")) config.classic_gamma = doc["classic_gamma"].get<double>();
    if (doc.contains("jobs")) config.jobs = doc["jobs"].get<int>();
    if (doc.contains("oracle_limits")) {
        const auto& limits = doc["oracle_limits"];
        if (limits.contains("max_tasks")) config.oracle_limits.max_tasks = limits["max_tasks"].get<int>();
        if (limits.contains("max_opportunities"))
            config.oracle_limits.max_opportunities = limits["max_opportunities"].get<int>();
        if (limits.contains("node_budget"))
            config.oracle_limits.node_budget = limits["node_budget"].get<long long>();
    }
    return config;
}

namespace {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

ReplicaOutcome evaluate_schedule(const Schedule& schedule, const Instance& instance) {
    ReplicaOutcome outcome;
    outcome.profit = objective(schedule, instance);
    outcome.finished_tasks = static_cast<int>(schedule.scheduled_task_ids().size());
    const OrbitUsage usage = total_usage(schedule, instance);
    outcome.consumed_energy = usage.energy;
    outcome.consumed_memory = usage.memory;
    const auto [pm, pe] = resource_ratios(schedule, instance);
    outcome.profit_memory_ratio = pm;
    outcome.profit_energy_ratio = pe;
    return outcome;
}

// Simple index-claiming worker pool; results land in pre-sized slots so the
// aggregation order never depends on scheduling.
void parallel_for(int jobs, int count, const std::function<void(int)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    const int n_workers = std::min(jobs, count);
    for (int w = 0; w < n_workers; ++w)
        workers.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& worker : workers) worker.join();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    if (config.algorithms.empty()) throw ArgumentError("experiment needs at least one algorithm");
    if (config.replicas < 1) throw ArgumentError("replicas must be >= 1");

    Scenario scenario;
    if (config.scenario_file)
        scenario = load_scenario_file(*config.scenario_file);
    else if (config.generator)
        scenario = generate(*config.generator);
    else
        throw ArgumentError("experiment needs a scenario source");
    const Instance instance(std::move(scenario));

    const int jobs = config.jobs > 0 ? config.jobs
                                     : std::max(1u, std::thread::hardware_concurrency());

    ExperimentResult result;
    for (Algorithm algorithm : config.algorithms) {
        std::vector<ReplicaOutcome> outcomes;
        bool available = true;

        const bool deterministic =
            algorithm == Algorithm::HPFS || algorithm == Algorithm::ORACLE;
        const int n_runs = deterministic ? 1 : config.replicas;
        outcomes.resize(n_runs);

        std::atomic<bool> failed{false};
        parallel_for(jobs, n_runs, [&](int replica) {
            const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(replica);
            const auto started = std::chrono::steady_clock::now();
            Schedule schedule;
            try {
                switch (algorithm) {
                    case Algorithm::ASA_DTC:
                    case Algorithm::ASA_STC:
                    case Algorithm::ASA_NONTC: {
                        AnnealParams params = default_params(instance.task_count(), seed);
                        if (config.max_itr) params.max_itr = *config.max_itr;
                        const VariantMode mode = algorithm == Algorithm::ASA_DTC
                                                     ? VariantMode::DTC
                                                     : algorithm == Algorithm::ASA_STC
                                                           ? VariantMode::STC
                                                           : VariantMode::NONTC;
                        schedule = run_variant(instance, mode, params).best;
                        break;
                    }
                    case Algorithm::CLASSIC_SA: {
                        ClassicSaParams params;
                        params.lambda0 = config.classic_lambda0;
                        params.gamma = config.classic_gamma;
                        params.max_itr = config.max_itr
                                             ? *config.max_itr
                                             : default_params(instance.task_count()).max_itr;
                        params.rng_seed = seed;
                        schedule = classic_sa(instance, params).best;
                        break;
                    }
                    case Algorithm::HPFS:
                        schedule = hpfs(instance);
                        break;
                    case Algorithm::ORACLE:
                        schedule = exact_solve(instance, config.oracle_limits).schedule;
                        break;
                }
            } catch (const BudgetError&) {
                failed = true;
                return;
            }
            ReplicaOutcome outcome = evaluate_schedule(schedule, instance);
            outcome.replica = replica;
            outcome.seed = seed;
            outcome.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            outcomes[replica] = outcome;
        });
        if (failed) {
            available = false;
            outcomes.clear();
        }

        ResultRow row;
        row.algorithm = algorithm;
        row.available = available;
        row.replicas = static_cast<int>(outcomes.size());
        if (available) {
            std::vector<double> profits, finished, times, pm, pe;
            for (const ReplicaOutcome& o : outcomes) {
                profits.push_back(static_cast<double>(o.profit));
                finished.push_back(static_cast<double>(o.finished_tasks));
                times.push_back(o.wall_seconds);
                pm.push_back(o.profit_memory_ratio);
                pe.push_back(o.profit_energy_ratio);
            }
            row.mean_profit = sample_mean(profits);
            row.mean_finished = sample_mean(finished);
            row.sd_profit = std::sqrt(sample_variance(profits, row.mean_profit));
            row.mean_wall_seconds = sample_mean(times);
            row.profit_memory_ratio = sample_mean(pm);
            row.profit_energy_ratio = sample_mean(pe);
        }
        result.rows.push_back(row);
        result.replicas.emplace_back(algorithm, std::move(outcomes));
    }

    // IMP and significance against the reference algorithm.
    const Algorithm reference = config.reference.value_or(
        std::find(config.algorithms.begin(), config.algorithms.end(), Algorithm::ASA_STC) !=
                config.algorithms.end()
            ? Algorithm::ASA_STC
            : config.algorithms.front());
    const auto ref_row = std::find_if(result.rows.begin(), result.rows.end(),
                                      [&](const ResultRow& r) { return r.algorithm == reference; });
    if (ref_row != result.rows.end() && ref_row->available) {
        std::vector<double> ref_profits;
        for (const auto& [algorithm, outcomes] : result.replicas)
            if (algorithm == reference)
                for (const ReplicaOutcome& o : outcomes)
                    ref_profits.push_back(static_cast<double>(o.profit));
        for (std::size_t i = 0; i < result.rows.size(); ++i) {
            ResultRow& row = result.rows[i];
            if (!row.available) continue;
            if (ref_row->mean_profit != 0.0)
                row.imp_vs_reference =
                    (row.mean_profit - ref_row->mean_profit) / ref_row->mean_profit;
            if (row.algorithm == reference) {
                row.imp_vs_reference = 0.0;
                continue;
            }
            std::vector<double> profits;
            for (const ReplicaOutcome& o : result.replicas[i].second)
                profits.push_back(static_cast<double>(o.profit));
            if (profits.size() >= 2 && ref_profits.size() >= 2) {
                const WelchResult w = welch_t(profits, ref_profits);
                row.t_stat = w.t;
                row.significant = w.significant;
            }
        }
    }
    return result;
}

std::string ExperimentResult::summary_csv() const {
    std::ostringstream out;
    out << "algorithm,available,replicas,mean_profit,mean_finished,sd_profit,"
           "profit_memory_ratio,profit_energy_ratio,imp_vs_reference,t_stat,significant\n";
    for (const ResultRow& row : rows) {
        out << to_string(row.algorithm) << ',' << (row.available ? 1 : 0) << ',' << row.replicas
            << ',' << format_double(row.mean_profit) << ',' << format_double(row.mean_finished)
            << ',' << format_double(row.sd_profit) << ','
            << format_double(row.profit_memory_ratio) << ','
            << format_double(row.profit_energy_ratio) << ','
            << format_double(row.imp_vs_reference) << ',' << format_double(row.t_stat) << ','
            << (row.significant ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string ExperimentResult::replica_csv() const {
    std::ostringstream out;
    out << "algorithm,replica,seed,profit,finished_tasks,consumed_energy,consumed_memory,"
           "profit_memory_ratio,profit_energy_ratio\n";
    for (const auto& [algorithm, outcomes] : replicas)
        for (const ReplicaOutcome& o : outcomes)
            out << to_string(algorithm) << ',' << o.replica << ',' << o.seed << ',' << o.profit
                << ',' << o.finished_tasks << ',' << format_double(o.consumed_energy) << ','
                << format_double(o.consumed_memory) << ',' << format_double(o.profit_memory_ratio)
                << ',' << format_double(o.profit_energy_ratio) << '\n';
    return out.str();
}

std::string ExperimentResult::summary_table(bool with_time) const {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-11s %4s %10s %9s %8s %8s %8s %8s %6s %5s", "algorithm",
                  "runs", "mean", "finished", "sd", "p/mem", "p/energy", "imp", "t", "sig");
    out << buf;
    if (with_time) out << "   t_mean(s)";
    out << '\n';
    for (const ResultRow& row : rows) {
        if (!row.available) {
            std::snprintf(buf, sizeof(buf), "%-11s %4s %10s", to_string(row.algorithm).c_str(),
                          "-", "unavailable");
            out << buf << '\n';
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%-11s %4d %10.2f %9.2f %8.2f %8.4f %8.4f %6.3f %6.2f %5s",
                      to_string(row.algorithm).c_str(), row.replicas, row.mean_profit,
                      row.mean_finished, row.sd_profit, row.profit_memory_ratio,
                      row.profit_energy_ratio, row.imp_vs_reference, row.t_stat,
                      row.significant ? "+" : "");
        out << buf;
        if (with_time) {
            std::snprintf(buf, sizeof(buf), "   %9.3f", row.mean_wall_seconds);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace sosp
