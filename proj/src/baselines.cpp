#include "sosp/baselines.hpp"

#include <algorithm>
#include <numeric>

namespace sosp {

std::string to_string(VariantMode mode) {
    switch (mode) {
        case VariantMode::DTC: return "DTC";
        case VariantMode::STC: return "STC";
        case VariantMode::NONTC: return "NONTC";
    }
    return "?";
}

namespace {

bool isolated_insert_fits(const std::vector<ScheduledItem>& items, const ScheduledItem& entrant,
                          const Orbit& orbit) {
    std::vector<ScheduledItem> trial = items;
    auto pos = std::upper_bound(trial.begin(), trial.end(), entrant,
                                [](const ScheduledItem& a, const ScheduledItem& b) {
                                    return std::tie(a.window.start, a.window.end) <
                                           std::tie(b.window.start, b.window.end);
                                });
    trial.insert(pos, entrant);
    if (static_cast<int>(trial.size()) > orbit.max_openings) return false;
    for (std::size_t i = 0; i + 1 < trial.size(); ++i)
        if (!setup_gap_ok(trial[i], trial[i + 1], orbit)) return false;
    const OrbitUsage usage = orbit_usage(trial, orbit);
    return usage.energy <= orbit.energy_capacity + kEps &&
           usage.memory <= orbit.memory_capacity + kEps;
}

double richness(const std::vector<ScheduledItem>& items, const Orbit& orbit) {
    const OrbitUsage usage = orbit_usage(items, orbit);
    const double e = orbit.energy_capacity > 0
                         ? (orbit.energy_capacity - usage.energy) / orbit.energy_capacity
                         : 0.0;
    const double m = orbit.memory_capacity > 0
                         ? (orbit.memory_capacity - usage.memory) / orbit.memory_capacity
                         : 0.0;
    return e + m;
}

}  // namespace

Schedule hpfs(const Instance& instance) {
    Schedule schedule = instance.empty_schedule();
    for (int task_id : instance.tasks_by_weight()) {
        int best_orbit = -1;
        int best_opp = -1;
        double best_richness = 0.0;
        for (int opp_index : instance.opportunities_of_task(task_id)) {
            const Opportunity& opp = instance.opportunity(opp_index);
            const Orbit& orbit = instance.orbit(opp.orbit_id);
            const auto& items = schedule.items_by_orbit[opp.orbit_id];
            if (!isolated_insert_fits(items, singleton_item(opp, instance), orbit)) continue;
            const double r = richness(items, orbit);
            if (best_orbit < 0 || r > best_richness + kEps ||
                (r > best_richness - kEps && opp.orbit_id < best_orbit)) {
                best_orbit = opp.orbit_id;
                best_opp = opp_index;
                best_richness = r;
            }
        }
        if (best_orbit < 0) continue;
        auto& items = schedule.items_by_orbit[best_orbit];
        ScheduledItem entrant = singleton_item(instance.opportunity(best_opp), instance);
        auto pos = std::upper_bound(items.begin(), items.end(), entrant,
                                    [](const ScheduledItem& a, const ScheduledItem& b) {
                                        return std::tie(a.window.start, a.window.end) <
                                               std::tie(b.window.start, b.window.end);
                                    });
        items.insert(pos, std::move(entrant));
    }
    return schedule;
}

// Geometric merge for the static pre-pass: angle and duration checks only.
static std::optional<ScheduledItem> merge_geometric(const ScheduledItem& group,
                                                    const Opportunity& opp,
                                                    const Instance& instance) {
    const AngleRange ranges[2] = {group.angle_range, opp.angle_range};
    const auto intersected = intersect_ranges(ranges);
    if (!intersected) return std::nullopt;
    const TimeWindow windows[2] = {group.window, opp.window};
    const TimeWindow merged = merge_windows(windows);
    if (merged.length() > instance.scenario().max_cluster_duration) return std::nullopt;

    ScheduledItem out = group;
    out.window = merged;
    out.angle_range = *intersected;
    out.exec_angle = intersected->midpoint();
    out.weight += instance.task(opp.task_id).weight;
    out.member_task_ids.push_back(opp.task_id);  // orbit streams come sorted by start
    return out;
}

// Resource screen at pre-pass time: nothing is consumed yet, so both
// weights sit at their floor and the test compares raw resource totals.
static bool worthwhile_at_floor(const ScheduledItem& group, const Opportunity& opp,
                                const ScheduledItem& merged, const Instance& instance) {
    const ClusterCost cost =
        resource_delta(group.window, group.exec_angle, opp.window, opp.angle_range.midpoint(),
                       merged.window, merged.exec_angle, instance.orbit(opp.orbit_id));
    return worthwhile(cost, ResourceWeights{});
}

PrepassResult static_cluster_prepass(const Instance& instance) {
    const Scenario& scenario = instance.scenario();
    std::vector<char> consumed(scenario.tasks.size(), 0);
    std::vector<ScheduledItem> frozen;  // groups with >= 2 members

    for (int j = 0; j < instance.orbit_count(); ++j) {
        std::optional<ScheduledItem> group;
        auto close_group = [&] {
            if (group && group->is_cluster()) {
                for (int id : group->member_task_ids) consumed[id] = 1;
                frozen.push_back(*group);
            }
            group.reset();
        };
        for (int opp_index : instance.opportunities_on_orbit(j)) {
            const Opportunity& opp = instance.opportunity(opp_index);
            if (consumed[opp.task_id]) continue;
            if (!group) {
                group = singleton_item(opp, instance);
                continue;
            }
            if (std::find(group->member_task_ids.begin(), group->member_task_ids.end(),
                          opp.task_id) != group->member_task_ids.end()) {
                continue;
            }
            auto merged = merge_geometric(*group, opp, instance);
            if (merged && worthwhile_at_floor(*group, opp, *merged, instance)) {
                // Pairwise freezing: lock the pair and move on.
                group = std::move(*merged);
                close_group();
            } else {
                close_group();
                group = singleton_item(opp, instance);
            }
        }
        close_group();
    }

    PrepassResult result;
    std::vector<int> remap(scenario.tasks.size(), -1);
    for (const TaskSpec& t : scenario.tasks) {
        if (consumed[t.id]) continue;
        remap[t.id] = static_cast<int>(result.scenario.tasks.size());
        result.scenario.tasks.push_back({remap[t.id], t.weight});
        result.components_of_task.push_back({t.id});
    }
    result.scenario.orbits = scenario.orbits;
    result.scenario.horizon_seconds = scenario.horizon_seconds;
    result.scenario.max_cluster_duration = scenario.max_cluster_duration;
    for (const Opportunity& opp : scenario.opportunities) {
        if (consumed[opp.task_id]) continue;
        Opportunity copy = opp;
        copy.task_id = remap[opp.task_id];
        result.scenario.opportunities.push_back(copy);
    }
    for (const ScheduledItem& group : frozen) {
        const int new_id = static_cast<int>(result.scenario.tasks.size());
        result.scenario.tasks.push_back({new_id, group.weight});
        result.components_of_task.push_back(group.member_task_ids);
        result.scenario.opportunities.push_back(
            {new_id, group.orbit_id, group.window, group.angle_range});
    }
    return result;
}

Schedule translate_schedule(const Schedule& transformed_schedule, const PrepassResult& prepass,
                            const Instance& original) {
    Schedule out = original.empty_schedule();
    for (std::size_t j = 0; j < transformed_schedule.items_by_orbit.size(); ++j) {
        for (const ScheduledItem& item : transformed_schedule.items_by_orbit[j]) {
            ScheduledItem translated = item;
            translated.member_task_ids.clear();
            for (int new_id : item.member_task_ids) {
                const auto& components = prepass.components_of_task[new_id];
                translated.member_task_ids.insert(translated.member_task_ids.end(),
                                                  components.begin(), components.end());
            }
            std::sort(translated.member_task_ids.begin(), translated.member_task_ids.end(),
                      [&](int a, int b) {
                          const Opportunity& oa = original.opportunity(
                              *original.find_opportunity(a, translated.orbit_id));
                          const Opportunity& ob = original.opportunity(
                              *original.find_opportunity(b, translated.orbit_id));
                          return std::tie(oa.window.start, oa.window.end, a) <
                                 std::tie(ob.window.start, ob.window.end, b);
                      });
            out.items_by_orbit[j].push_back(std::move(translated));
        }
    }
    return out;
}

RunResult run_variant(const Instance& instance, VariantMode mode, const AnnealParams& params) {
    switch (mode) {
        case VariantMode::DTC:
            return run(instance, params);
        case VariantMode::NONTC: {
            AnnealParams p = params;
            p.clustering_enabled = false;
            return run(instance, p);
        }
        case VariantMode::STC: {
            PrepassResult prepass = static_cluster_prepass(instance);
            Instance transformed(prepass.scenario);
            AnnealParams p = params;
            p.clustering_enabled = false;
            RunResult result = run(transformed, p);
            result.best = translate_schedule(result.best, prepass, instance);
            return result;
        }
    }
    throw ArgumentError("unknown variant mode");
}

RunResult classic_sa(const Instance& instance, const ClassicSaParams& params) {
    AnnealParams base = default_params(instance.task_count(), params.rng_seed);
    base.max_itr = params.max_itr;
    base.clustering_enabled = false;
    CoolingSpec cooling;
    cooling.adaptive = false;
    cooling.lambda0 = params.lambda0;
    cooling.gamma = params.gamma;
    return run_configured(instance, base, cooling, /*use_tabu=*/false, /*adaptive_probs=*/false);
}

}  // namespace sosp
