#include "sosp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace sosp {

namespace {

struct CandidateItem {
    ScheduledItem item;
    std::uint64_t member_mask = 0;
};

struct Budget {
    long long remaining;
    void charge() {
        if (--remaining < 0) throw BudgetError("exact solver exceeded its node budget");
    }
};

bool fits_alone(const ScheduledItem& item, const Orbit& orbit) {
    const double len = static_cast<double>(item.window.length());
    return orbit.obs_energy_rate * len <= orbit.energy_capacity + kEps &&
           orbit.memory_rate * len <= orbit.memory_capacity + kEps;
}

// Depth-first subset enumeration of the opportunities on one orbit. The
// angle intersection only shrinks and the merged span only grows as members
// are added, so branches that fail those checks are cut outright; an
// energy overrun is not monotone (the midpoint can move toward zero) and
// only suppresses the emit.
void extend_candidates(const std::vector<int>& opp_indices, std::size_t next,
                       const ScheduledItem& current, std::uint64_t mask, const Orbit& orbit,
                       const Instance& instance, TimeSec max_span, Budget& budget,
                       std::vector<CandidateItem>& out) {
    budget.charge();
    if (fits_alone(current, orbit)) out.push_back({current, mask});

    for (std::size_t i = next; i < opp_indices.size(); ++i) {
        const Opportunity& opp = instance.opportunity(opp_indices[i]);
        AngleRange range{std::max(current.angle_range.lo, opp.angle_range.lo),
                         std::min(current.angle_range.hi, opp.angle_range.hi)};
        if (range.width() < kEps) continue;
        TimeWindow window{std::min(current.window.start, opp.window.start),
                          std::max(current.window.end, opp.window.end)};
        if (window.length() > max_span) continue;
        if (orbit.memory_rate * static_cast<double>(window.length()) >
            orbit.memory_capacity + kEps)
            continue;

        ScheduledItem merged = current;
        merged.window = window;
        merged.angle_range = range;
        merged.exec_angle = range.midpoint();
        merged.weight += instance.task(opp.task_id).weight;
        merged.member_task_ids.push_back(opp.task_id);  // opportunities come sorted by start
        extend_candidates(opp_indices, i + 1, merged, mask | (1ULL << opp.task_id), orbit,
                          instance, max_span, budget, out);
    }
}

struct OrbitState {
    std::vector<const CandidateItem*> chosen;
    double energy = 0.0;
    double memory = 0.0;
};

struct Search {
    const Instance& instance;
    std::vector<CandidateItem> candidates;
    std::vector<std::uint64_t> suffix_tasks;  // tasks reachable from index k on
    std::vector<int> weight_of_task;
    Budget budget;

    std::vector<OrbitState> orbits;
    std::uint64_t used = 0;
    long long profit = 0;

    long long best_profit = -1;
    std::vector<std::vector<const CandidateItem*>> best_choice;

    long long mask_weight(std::uint64_t mask) const {
        long long sum = 0;
        while (mask) {
            const int bit = std::countr_zero(mask);
            sum += weight_of_task[bit];
            mask &= mask - 1;
        }
        return sum;
    }

    void record_if_best() {
        if (profit <= best_profit) return;
        best_profit = profit;
        best_choice.assign(orbits.size(), {});
        for (std::size_t j = 0; j < orbits.size(); ++j) best_choice[j] = orbits[j].chosen;
    }

    void dfs(std::size_t k) {
        budget.charge();
        record_if_best();
        if (k == candidates.size()) return;
        if (profit + mask_weight(suffix_tasks[k] & ~used) <= best_profit) return;

        const CandidateItem& cand = candidates[k];
        if ((cand.member_mask & used) == 0) {
            const int j = cand.item.orbit_id;
            const Orbit& orbit = instance.orbit(j);
            OrbitState& state = orbits[j];
            bool feasible = static_cast<int>(state.chosen.size()) < orbit.max_openings;
            double slew = 0.0;
            if (feasible && !state.chosen.empty()) {
                const ScheduledItem& tail = state.chosen.back()->item;
                feasible = setup_gap_ok(tail, cand.item, orbit);
                slew = orbit.slew_energy_rate *
                       (std::abs(tail.exec_angle) + std::abs(cand.item.exec_angle)) /
                       orbit.slew_velocity;
            }
            const double len = static_cast<double>(cand.item.window.length());
            const double energy_add = orbit.obs_energy_rate * len + slew;
            const double memory_add = orbit.memory_rate * len;
            if (feasible && state.energy + energy_add <= orbit.energy_capacity + kEps &&
                state.memory + memory_add <= orbit.memory_capacity + kEps) {
                state.chosen.push_back(&cand);
                state.energy += energy_add;
                state.memory += memory_add;
                used |= cand.member_mask;
                profit += cand.item.weight;

                dfs(k + 1);

                profit -= cand.item.weight;
                used &= ~cand.member_mask;
                state.energy -= energy_add;
                state.memory -= memory_add;
                state.chosen.pop_back();
            }
        }
        dfs(k + 1);
    }
};

}  // namespace

OracleResult exact_solve(const Instance& instance, const OracleLimits& limits,
                         bool allow_clusters) {
    if (limits.max_tasks < 1 || limits.max_opportunities < 1 || limits.node_budget < 1)
        throw ArgumentError("oracle limits must be positive");
    if (instance.task_count() > limits.max_tasks)
        throw BudgetError("instance has " + std::to_string(instance.task_count()) +
                          " tasks, over the exact-solver limit of " +
                          std::to_string(limits.max_tasks));
    const int n_opps = static_cast<int>(instance.scenario().opportunities.size());
    if (n_opps > limits.max_opportunities)
        throw BudgetError("instance has " + std::to_string(n_opps) +
                          " opportunities, over the exact-solver limit of " +
                          std::to_string(limits.max_opportunities));
    if (instance.task_count() > 62)
        throw BudgetError("exact solver supports at most 62 tasks");

    Search search{instance, {}, {}, {}, Budget{limits.node_budget}, {}, 0, 0, -1, {}};
    search.weight_of_task.resize(instance.task_count());
    for (int t = 0; t < instance.task_count(); ++t)
        search.weight_of_task[t] = instance.scenario().tasks[t].weight;

    for (int j = 0; j < instance.orbit_count(); ++j) {
        const std::vector<int>& opp_indices = instance.opportunities_on_orbit(j);
        std::vector<CandidateItem> orbit_candidates;
        for (std::size_t i = 0; i < opp_indices.size(); ++i) {
            const Opportunity& opp = instance.opportunity(opp_indices[i]);
            const ScheduledItem base = singleton_item(opp, instance);
            if (allow_clusters) {
                extend_candidates(opp_indices, i + 1, base, 1ULL << opp.task_id,
                                  instance.orbit(j), instance,
                                  instance.scenario().max_cluster_duration, search.budget,
                                  orbit_candidates);
            } else if (fits_alone(base, instance.orbit(j))) {
                orbit_candidates.push_back({base, 1ULL << opp.task_id});
            }
        }
        std::sort(orbit_candidates.begin(), orbit_candidates.end(),
                  [](const CandidateItem& a, const CandidateItem& b) {
                      return std::tie(a.item.window.start, a.item.window.end, a.member_mask) <
                             std::tie(b.item.window.start, b.item.window.end, b.member_mask);
                  });
        for (CandidateItem& cand : orbit_candidates)
            search.candidates.push_back(std::move(cand));
    }

    search.suffix_tasks.assign(search.candidates.size() + 1, 0);
    for (std::size_t k = search.candidates.size(); k-- > 0;)
        search.suffix_tasks[k] = search.suffix_tasks[k + 1] | search.candidates[k].member_mask;

    search.orbits.resize(instance.orbit_count());
    search.dfs(0);

    OracleResult result;
    result.profit = std::max<long long>(0, search.best_profit);
    result.schedule = instance.empty_schedule();
    for (int j = 0; j < instance.orbit_count(); ++j)
        for (const CandidateItem* cand : search.best_choice.empty()
                                             ? std::vector<const CandidateItem*>{}
                                             : search.best_choice[j])
            result.schedule.items_by_orbit[j].push_back(cand->item);
    return result;
}

}  // namespace sosp
