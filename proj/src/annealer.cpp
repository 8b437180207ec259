#include "sosp/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sosp {

AnnealParams default_params(int task_count, std::uint64_t seed) {
    AnnealParams params;
    params.tabu_len = std::max(1, task_count / 50);
    params.max_itr = 200LL * std::max(1, task_count);
    params.rng_seed = seed;
    return params;
}

void check_params(const AnnealParams& params) {
    if (!(params.lambda_min > 0)) throw ArgumentError("lambda_min must be > 0");
    if (!(params.rho > 0)) throw ArgumentError("rho must be > 0");
    if (!(params.delta >= 1)) throw ArgumentError("delta must be >= 1");
    if (!(params.eta > 0 && params.eta < 1)) throw ArgumentError("eta must be in (0, 1)");
    if (params.itr < 1) throw ArgumentError("itr must be >= 1");
    if (params.tabu_len < 1) throw ArgumentError("tabu_len must be >= 1");
    if (params.max_itr < 0) throw ArgumentError("max_itr must be >= 0");
}

double temperature(long long bad_moves, const AnnealParams& params) {
    return params.lambda_min +
           params.rho * std::log(1.0 + static_cast<double>(bad_moves) / params.delta);
}

long long update_counter(long long bad_moves, long long delta_f, bool accepted,
                         bool count_rejected_degradations) {
    if (delta_f > 0) return 0;
    if (delta_f == 0) return bad_moves;
    if (!count_rejected_degradations && !accepted) return bad_moves;
    return bad_moves + 1;
}

bool accept(long long delta_f, double lambda, Rng& rng) {
    if (delta_f > 0) return true;
    return std::exp(static_cast<double>(delta_f) / lambda) > rng.uniform01();
}

Schedule initial_solution(const Instance& instance, const AnnealParams& params, Rng& /*rng*/) {
    Schedule current = instance.empty_schedule();
    long long profit = 0;
    for (int task_id : instance.tasks_by_weight()) {
        const auto weights = resource_weights_per_orbit(current, instance);
        auto move = insert_task(current, task_id, instance, weights, params.clustering_enabled);
        if (!move) continue;
        const long long candidate_profit = objective(move->candidate, instance);
        if (candidate_profit > profit) {
            current = std::move(move->candidate);
            profit = candidate_profit;
        }
    }
    return current;
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
    out << "g,lambda,profit_current,profit_best,structure,accepted\n";
    char lambda_buf[32];
    for (const TraceRow& row : trace.rows) {
        std::snprintf(lambda_buf, sizeof(lambda_buf), "%.9g", row.lambda);
        out << row.iteration << ',' << lambda_buf << ',' << row.profit_current << ','
            << row.profit_best << ',' << row.structure << ',' << (row.accepted ? 1 : 0) << '\n';
    }
}

RunResult run_configured(const Instance& instance, const AnnealParams& params,
                         const CoolingSpec& cooling, bool use_tabu, bool adaptive_probs) {
    check_params(params);
    Rng rng(params.rng_seed);

    Schedule current = initial_solution(instance, params, rng);
    long long profit = objective(current, instance);
    Schedule best = current;
    long long best_profit = profit;

    NeighborhoodStats stats;
    TabuList tabu(static_cast<std::size_t>(params.tabu_len));
    long long bad_moves = 0;

    RunTrace trace;
    trace.rows.reserve(static_cast<std::size_t>(std::min<long long>(params.max_itr, 1 << 20)));

    for (long long g = 0; g < params.max_itr;) {
        const double lambda = cooling.adaptive
                                  ? temperature(bad_moves, params)
                                  : cooling.lambda0 * std::pow(cooling.gamma, static_cast<double>(g));
        ++g;

        const int structure = select_structure(stats, rng);
        const auto weights = resource_weights_per_orbit(current, instance);
        std::optional<Move> move;
        if (structure == 1)
            move = insertion_removal(current, instance, tabu, weights, rng,
                                     params.clustering_enabled);
        else
            move = migration(current, instance, tabu, weights, rng, params.clustering_enabled);
        stats.selections[structure - 1] += 1;

        bool accepted = false;
        if (move) {
            const long long candidate_profit = objective(move->candidate, instance);
            const long long delta_f = candidate_profit - profit;
            accepted = accept(delta_f, lambda, rng);
            if (accepted) {
                current = std::move(move->candidate);
                profit = candidate_profit;
                if (delta_f > 0) stats.successes[structure - 1] += 1;
                if (use_tabu)
                    for (int task_id : move->removed_task_ids) tabu.push(task_id);
                if (profit > best_profit) {
                    best = current;
                    best_profit = profit;
                }
            }
            bad_moves = update_counter(bad_moves, delta_f, accepted,
                                       params.count_rejected_degradations);
        }
        // A structure with no move available counts as a zero-delta
        // iteration: the selection counter advanced, nothing else changes.

        if (adaptive_probs && g % params.itr == 0) update_probabilities(stats, params.eta);

        trace.rows.push_back({g, lambda, profit, best_profit, structure, accepted});
    }
    return {std::move(best), std::move(trace)};
}

RunResult run(const Instance& instance, const AnnealParams& params) {
    return run_configured(instance, params, CoolingSpec{}, /*use_tabu=*/true,
                          /*adaptive_probs=*/true);
}

}  // namespace sosp
