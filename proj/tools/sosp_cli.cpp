// Command-line front end: generate scenarios, run the schedulers, check
// schedule feasibility, solve tiny instances exactly, and run benchmark
// experiments.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sosp/bench.hpp"

namespace {

using namespace sosp;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

void add_generator_flags(CLI::App* cmd, GeneratorConfig& config) {
    cmd->add_option("--targets", config.n_targets, "Number of point targets")
        ->capture_default_str();
    cmd->add_option("--orbits", config.n_orbits, "Number of orbit slots")->capture_default_str();
    cmd->add_option("--horizon", config.horizon_seconds, "Scheduling horizon, seconds")
        ->capture_default_str();
    cmd->add_option("--lat-min", config.lat_min, "Area south bound, degrees")
        ->capture_default_str();
    cmd->add_option("--lat-max", config.lat_max, "Area north bound, degrees")
        ->capture_default_str();
    cmd->add_option("--lon-min", config.lon_min, "Area west bound, degrees")
        ->capture_default_str();
    cmd->add_option("--lon-max", config.lon_max, "Area east bound, degrees")
        ->capture_default_str();
    cmd->add_option("--visibility-prob", config.visibility_prob,
                    "Probability a target gets any windows")
        ->capture_default_str();
    cmd->add_option("--windows-per-target", config.windows_per_visible_target,
                    "Mean windows per visible target")
        ->capture_default_str();
    cmd->add_option("--window-len-min", config.window_len_min, "Shortest window, seconds")
        ->capture_default_str();
    cmd->add_option("--window-len-max", config.window_len_max, "Longest window, seconds")
        ->capture_default_str();
    cmd->add_option("--halfwidth-min", config.angle_halfwidth_min,
                    "Narrowest angle halfwidth, degrees")
        ->capture_default_str();
    cmd->add_option("--halfwidth-max", config.angle_halfwidth_max,
                    "Widest angle halfwidth, degrees")
        ->capture_default_str();
    cmd->add_option("--weight-min", config.weight_min, "Smallest task weight")
        ->capture_default_str();
    cmd->add_option("--weight-max", config.weight_max, "Largest task weight")
        ->capture_default_str();
    cmd->add_option("--max-cluster-duration", config.max_cluster_duration,
                    "Longest continuous observation, seconds")
        ->capture_default_str();
    cmd->add_option("--seed", config.seed, "Generator seed")->capture_default_str();
}

struct SolveOptions {
    std::string scenario_path;
    std::string algorithm = "ASA-DTC";
    std::optional<std::string> out_path;
    std::optional<std::string> trace_path;
    AnnealParams params;  // lambda_min/rho/delta/eta/itr defaults
    std::optional<long long> max_itr;
    std::optional<int> tabu_len;
    std::uint64_t seed = 1;
    double classic_lambda0 = 5.0;
    double classic_gamma = 0.999;
    bool counter_accepted_only = false;
};

int run_solve(const SolveOptions& opt) {
    const Scenario scenario = load_scenario_file(opt.scenario_path);
    const Instance instance(scenario);

    AnnealParams params = default_params(instance.task_count(), opt.seed);
    params.lambda_min = opt.params.lambda_min;
    params.rho = opt.params.rho;
    params.delta = opt.params.delta;
    params.eta = opt.params.eta;
    params.itr = opt.params.itr;
    params.count_rejected_degradations = !opt.counter_accepted_only;
    if (opt.max_itr) params.max_itr = *opt.max_itr;
    if (opt.tabu_len) params.tabu_len = *opt.tabu_len;

    RunResult result;
    const Algorithm algorithm = algorithm_from_string(opt.algorithm);
    switch (algorithm) {
        case Algorithm::ASA_DTC:
            result = run_variant(instance, VariantMode::DTC, params);
            break;
        case Algorithm::ASA_STC:
            result = run_variant(instance, VariantMode::STC, params);
            break;
        case Algorithm::ASA_NONTC:
            result = run_variant(instance, VariantMode::NONTC, params);
            break;
        case Algorithm::CLASSIC_SA: {
            ClassicSaParams classic;
            classic.lambda0 = opt.classic_lambda0;
            classic.gamma = opt.classic_gamma;
            classic.max_itr = params.max_itr;
            classic.rng_seed = opt.seed;
            result = classic_sa(instance, classic);
            break;
        }
        case Algorithm::HPFS:
            result.best = hpfs(instance);
            break;
        case Algorithm::ORACLE:
            throw ArgumentError("use the 'oracle' subcommand for exact solving");
    }

    const auto violations = validate(result.best, instance);
    if (!violations.empty()) {
        std::cerr << "internal error: solver emitted an infeasible schedule\n";
        return kExitValidation;
    }
    std::cout << "algorithm: " << opt.algorithm << "\n"
              << "profit: " << objective(result.best, instance) << "\n"
              << "finished_tasks: " << result.best.scheduled_task_ids().size() << "\n";
    if (opt.out_path) {
        save_schedule_file(scenario, result.best, *opt.out_path);
        std::cout << "schedule written to " << *opt.out_path << "\n";
    }
    if (opt.trace_path) {
        std::ofstream out(*opt.trace_path);
        if (!out) throw ParseError("cannot write file: " + *opt.trace_path);
        write_trace_csv(result.trace, out);
        std::cout << "trace written to " << *opt.trace_path << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-orbit satellite observation scheduling toolkit"};
    app.require_subcommand(1);

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "Generate a synthetic scenario file");
    GeneratorConfig gen_config;
    std::string gen_out;
    std::string gen_config_path;
    add_generator_flags(generate_cmd, gen_config);
    generate_cmd->add_option("--config", gen_config_path,
                             "Generator config JSON (flags override its values)");
    generate_cmd->add_option("--out", gen_out, "Output scenario file")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Run one scheduler on a scenario file");
    SolveOptions solve_opt;
    solve_cmd->add_option("--scenario", solve_opt.scenario_path, "Scenario JSON file")->required();
    solve_cmd
        ->add_option("--algo", solve_opt.algorithm,
                     "ASA-DTC, ASA-STC, ASA-NONTC, CLASSIC-SA or HPFS")
        ->capture_default_str();
    solve_cmd->add_option("--seed", solve_opt.seed, "Run seed")->capture_default_str();
    solve_cmd->add_option("--max-itr", solve_opt.max_itr,
                          "Iteration budget (default 200 per task)");
    solve_cmd->add_option("--lambda-min", solve_opt.params.lambda_min, "Temperature floor")
        ->capture_default_str();
    solve_cmd->add_option("--rho", solve_opt.params.rho, "Temperature rise weight")
        ->capture_default_str();
    solve_cmd->add_option("--delta", solve_opt.params.delta, "Temperature rise damping")
        ->capture_default_str();
    solve_cmd->add_option("--eta", solve_opt.params.eta, "Probability-update inertia")
        ->capture_default_str();
    solve_cmd->add_option("--itr", solve_opt.params.itr, "Probability-update period")
        ->capture_default_str();
    solve_cmd->add_option("--tabu-len", solve_opt.tabu_len,
                          "Tabu list length (default max(1, N/50))");
    solve_cmd->add_flag("--counter-accepted-only", solve_opt.counter_accepted_only,
                        "Advance the bad-move counter only on accepted degradations");
    solve_cmd->add_option("--classic-lambda0", solve_opt.classic_lambda0,
                          "CLASSIC-SA starting temperature")
        ->capture_default_str();
    solve_cmd->add_option("--classic-gamma", solve_opt.classic_gamma,
                          "CLASSIC-SA geometric cooling factor")
        ->capture_default_str();
    solve_cmd->add_option("--out", solve_opt.out_path, "Write the schedule to this file");
    solve_cmd->add_option("--trace", solve_opt.trace_path, "Write the per-iteration trace CSV");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "Check a schedule file for violations");
    std::string validate_path;
    validate_cmd->add_option("--schedule", validate_path, "Schedule JSON file")->required();

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Solve a tiny scenario exactly");
    std::string oracle_scenario;
    std::optional<std::string> oracle_out;
    OracleLimits oracle_limits;
    bool oracle_no_clusters = false;
    oracle_cmd->add_option("--scenario", oracle_scenario, "Scenario JSON file")->required();
    oracle_cmd->add_option("--max-tasks", oracle_limits.max_tasks, "Task-count limit")
        ->capture_default_str();
    oracle_cmd
        ->add_option("--max-opportunities", oracle_limits.max_opportunities,
                     "Opportunity-count limit")
        ->capture_default_str();
    oracle_cmd->add_option("--node-budget", oracle_limits.node_budget, "Search-node budget")
        ->capture_default_str();
    oracle_cmd->add_flag("--no-clusters", oracle_no_clusters,
                         "Restrict the oracle to isolated observations");
    oracle_cmd->add_option("--out", oracle_out, "Write the optimal schedule to this file");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark experiment");
    std::string bench_config_path;
    std::string bench_out_dir = "bench-results";
    std::optional<int> bench_jobs;
    bench_cmd->add_option("--config", bench_config_path, "Experiment config JSON")->required();
    bench_cmd->add_option("--out-dir", bench_out_dir, "Directory for result files")
        ->capture_default_str();
    bench_cmd->add_option("--jobs", bench_jobs, "Worker threads (default: hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (generate_cmd->parsed()) {
            GeneratorConfig config = gen_config;
            if (!gen_config_path.empty()) {
                // File values form the base; explicitly passed flags win.
                config = load_generator_config_file(gen_config_path);
                auto apply_if = [&](const char* name, auto member) {
                    if (generate_cmd->count(name) > 0) config.*member = gen_config.*member;
                };
                apply_if("--targets", &GeneratorConfig::n_targets);
                apply_if("--orbits", &GeneratorConfig::n_orbits);
                apply_if("--horizon", &GeneratorConfig::horizon_seconds);
                apply_if("--lat-min", &GeneratorConfig::lat_min);
                apply_if("--lat-max", &GeneratorConfig::lat_max);
                apply_if("--lon-min", &GeneratorConfig::lon_min);
                apply_if("--lon-max", &GeneratorConfig::lon_max);
                apply_if("--visibility-prob", &GeneratorConfig::visibility_prob);
                apply_if("--windows-per-target", &GeneratorConfig::windows_per_visible_target);
                apply_if("--window-len-min", &GeneratorConfig::window_len_min);
                apply_if("--window-len-max", &GeneratorConfig::window_len_max);
                apply_if("--halfwidth-min", &GeneratorConfig::angle_halfwidth_min);
                apply_if("--halfwidth-max", &GeneratorConfig::angle_halfwidth_max);
                apply_if("--weight-min", &GeneratorConfig::weight_min);
                apply_if("--weight-max", &GeneratorConfig::weight_max);
                apply_if("--max-cluster-duration", &GeneratorConfig::max_cluster_duration);
                apply_if("--seed", &GeneratorConfig::seed);
            }
            const Scenario scenario = generate(config);
            save_scenario_file(scenario, gen_out);
            std::cout << "scenario with " << scenario.tasks.size() << " tasks, "
                      << scenario.opportunities.size() << " opportunities written to " << gen_out
                      << "\n";
            return kExitOk;
        }
        if (solve_cmd->parsed()) return run_solve(solve_opt);
        if (validate_cmd->parsed()) {
            const auto [scenario, schedule] = load_schedule_file(validate_path);
            const Instance instance(scenario);
            const auto violations = validate(schedule, instance);
            if (violations.empty()) {
                std::cout << "OK: schedule is feasible (profit "
                          << objective(schedule, instance) << ")\n";
                return kExitOk;
            }
            for (const Violation& v : violations) {
                std::cout << to_string(v.constraint);
                if (v.orbit_id >= 0) std::cout << " orbit=" << v.orbit_id;
                if (v.item_index >= 0) std::cout << " item=" << v.item_index;
                if (v.task_id >= 0) std::cout << " task=" << v.task_id;
                std::cout << ": " << v.detail << "\n";
            }
            std::cout << violations.size() << " violation(s)\n";
            return kExitValidation;
        }
        if (oracle_cmd->parsed()) {
            const Scenario scenario = load_scenario_file(oracle_scenario);
            const Instance instance(scenario);
            const OracleResult result =
                exact_solve(instance, oracle_limits, !oracle_no_clusters);
            std::cout << "optimal profit: " << result.profit << "\n"
                      << "finished_tasks: " << result.schedule.scheduled_task_ids().size() << "\n";
            if (oracle_out) {
                save_schedule_file(scenario, result.schedule, *oracle_out);
                std::cout << "schedule written to " << *oracle_out << "\n";
            }
            return kExitOk;
        }
        if (bench_cmd->parsed()) {
            ExperimentConfig config = load_experiment_config_file(bench_config_path);
            if (bench_jobs) config.jobs = *bench_jobs;
            const ExperimentResult result = run_experiment(config);

            std::filesystem::create_directories(bench_out_dir);
            const auto write_file = [&](const std::string& name, const std::string& content) {
                std::ofstream out(bench_out_dir + "/" + name);
                if (!out) throw ParseError("cannot write file: " + bench_out_dir + "/" + name);
                out << content;
            };
            write_file("summary.csv", result.summary_csv());
            write_file("summary.txt", result.summary_table(/*with_time=*/false));
            write_file("replicas.csv", result.replica_csv());

            // Wall-clock means are hardware noise, so they go to the console
            // only; the files stay reproducible byte for byte.
            std::cout << result.summary_table(/*with_time=*/true) << "results written to "
                      << bench_out_dir << "/\n";
            return kExitOk;
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
