#pragma once

#include "sosp/annealer.hpp"

namespace sosp {

enum class VariantMode {
    DTC,    // clusters formed and dissolved inside the search
    STC,    // clusters frozen by a pre-pass, search runs without clustering
    NONTC,  // no clustering at all
};

std::string to_string(VariantMode mode);

/// Highest-priority-first greedy: walk tasks by descending weight and give
/// each one an isolated slot on the resource-richest orbit that still takes
/// it. Never clusters, never removes, fully deterministic.
Schedule hpfs(const Instance& instance);

/// Scenario rewritten by a static clustering pre-pass: mergeable
/// opportunity pairs become frozen cluster-tasks.
struct PrepassResult {
    Scenario scenario;
    // components_of_task[new_task_id] = the original task ids it stands for.
    std::vector<std::vector<int>> components_of_task;
};

PrepassResult static_cluster_prepass(const Instance& instance);

/// Expands frozen cluster-task memberships back to original task ids so the
/// schedule validates against the original scenario.
Schedule translate_schedule(const Schedule& transformed_schedule, const PrepassResult& prepass,
                            const Instance& original);

/// Runs the annealer in one of the three clustering modes. STC results are
/// translated back to original task ids.
RunResult run_variant(const Instance& instance, VariantMode mode, const AnnealParams& params);

struct ClassicSaParams {
    double lambda0 = 5.0;
    double gamma = 0.999;
    long long max_itr = 1;
    std::uint64_t rng_seed = 1;
};

/// Conventional simulated annealing reference: geometric cooling, no tabu
/// list, fixed 50/50 structure probabilities, no clustering.
RunResult classic_sa(const Instance& instance, const ClassicSaParams& params);

}  // namespace sosp
