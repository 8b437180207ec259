#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sosp/neighborhoods.hpp"

namespace sosp {

struct AnnealParams {
    double lambda_min = 0.5;  // temperature floor
    double rho = 1.0;         // temperature rise weight
    double delta = 10.0;      // rise-rate damping
    double eta = 0.8;         // inertia of the structure probabilities
    int itr = 10;             // probability-update period, iterations
    int tabu_len = 1;
    long long max_itr = 1;
    std::uint64_t rng_seed = 1;
    // When false, only accepted degradations advance the bad-move counter;
    // the default charges every degrading proposal.
    bool count_rejected_degradations = true;
    bool clustering_enabled = true;
};

/// Parameter set scaled to an instance: tabu length N/50 (floored at 1) and
/// an iteration budget of 200 per task.
AnnealParams default_params(int task_count, std::uint64_t seed = 1);

void check_params(const AnnealParams& params);

/// Adaptive temperature: rises logarithmically with the number of
/// consecutive bad moves and never drops below the floor.
double temperature(long long bad_moves, const AnnealParams& params);

/// Advances the bad-move counter: reset on improvement, hold on equal
/// profit, increment on degradation. With count_rejected_degradations off,
/// rejected degradations leave the counter unchanged.
long long update_counter(long long bad_moves, long long delta_f, bool accepted,
                         bool count_rejected_degradations = true);

/// Metropolis rule under maximization: improvements always pass, other
/// moves pass when exp(delta_f / lambda) beats a fresh uniform draw.
bool accept(long long delta_f, double lambda, Rng& rng);

/// Greedy construction: walk tasks in descending weight, run the insertion
/// procedure for each, and keep the partial result only when it improves
/// the objective.
Schedule initial_solution(const Instance& instance, const AnnealParams& params, Rng& rng);

struct TraceRow {
    long long iteration;
    double lambda;
    long long profit_current;
    long long profit_best;
    int structure;  // 1 insertion/removal, 2 migration
    bool accepted;
};

struct RunTrace {
    std::vector<TraceRow> rows;
};

void write_trace_csv(const RunTrace& trace, std::ostream& out);

struct RunResult {
    Schedule best;
    RunTrace trace;
};

/// Full annealing run: adaptive temperature, tabu list and adaptive
/// neighborhood selection. Deterministic in params.rng_seed.
RunResult run(const Instance& instance, const AnnealParams& params);

/// Shared annealing loop behind run() and the classic-SA baseline.
struct CoolingSpec {
    bool adaptive = true;   // false: geometric lambda0 * gamma^g
    double lambda0 = 5.0;
    double gamma = 0.999;
};

RunResult run_configured(const Instance& instance, const AnnealParams& params,
                         const CoolingSpec& cooling, bool use_tabu, bool adaptive_probs);

}  // namespace sosp
