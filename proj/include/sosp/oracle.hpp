#pragma once

#include "sosp/model.hpp"

namespace sosp {

struct OracleLimits {
    int max_tasks = 12;
    int max_opportunities = 30;
    long long node_budget = 100'000'000;
};

struct OracleResult {
    long long profit = 0;
    Schedule schedule;
};

/// Exhaustive reference solver for tiny instances. Enumerates every
/// feasible sensor opening (single opportunities and incrementally built
/// clusters), then branch-and-bounds over which openings to keep. The
/// resource-worthiness screen is deliberately not applied, so the result
/// upper-bounds every heuristic variant. Throws BudgetError when the
/// instance exceeds the limits or the node budget runs out.
OracleResult exact_solve(const Instance& instance, const OracleLimits& limits = {},
                         bool allow_clusters = true);

}  // namespace sosp
