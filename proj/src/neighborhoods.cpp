#include "sosp/neighborhoods.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <tuple>

namespace sosp {

namespace {

std::tuple<TimeSec, TimeSec, int> item_sort_key(const ScheduledItem& item) {
    return {item.window.start, item.window.end,
            item.member_task_ids.empty() ? -1 : item.member_task_ids.front()};
}

void sort_orbit(std::vector<ScheduledItem>& items) {
    std::sort(items.begin(), items.end(), [](const ScheduledItem& a, const ScheduledItem& b) {
        return item_sort_key(a) < item_sort_key(b);
    });
}

void insert_sorted(std::vector<ScheduledItem>& items, ScheduledItem item) {
    auto pos = std::upper_bound(items.begin(), items.end(), item,
                                [](const ScheduledItem& a, const ScheduledItem& b) {
                                    return item_sort_key(a) < item_sort_key(b);
                                });
    items.insert(pos, std::move(item));
}

// Rebuilds window, angle range, pointing angle and weight from the member
// list after a membership change.
void recompute_item(ScheduledItem& item, const Instance& instance) {
    std::sort(item.member_task_ids.begin(), item.member_task_ids.end(), [&](int a, int b) {
        const Opportunity& oa = instance.opportunity(*instance.find_opportunity(a, item.orbit_id));
        const Opportunity& ob = instance.opportunity(*instance.find_opportunity(b, item.orbit_id));
        return std::tie(oa.window.start, oa.window.end, a) <
               std::tie(ob.window.start, ob.window.end, b);
    });
    bool first = true;
    item.weight = 0;
    for (int task_id : item.member_task_ids) {
        const Opportunity& opp =
            instance.opportunity(*instance.find_opportunity(task_id, item.orbit_id));
        if (first) {
            item.window = opp.window;
            item.angle_range = opp.angle_range;
            first = false;
        } else {
            item.window.start = std::min(item.window.start, opp.window.start);
            item.window.end = std::max(item.window.end, opp.window.end);
            item.angle_range.lo = std::max(item.angle_range.lo, opp.angle_range.lo);
            item.angle_range.hi = std::min(item.angle_range.hi, opp.angle_range.hi);
        }
        item.weight += instance.task(task_id).weight;
    }
    item.exec_angle = item.angle_range.midpoint();
}

// Endpoint members of a cluster: the one opening the merged window and the
// one closing it.
int earliest_member(const ScheduledItem& item, const Instance& instance) {
    int best = item.member_task_ids.front();
    auto key = [&](int id) {
        const Opportunity& o = instance.opportunity(*instance.find_opportunity(id, item.orbit_id));
        return std::tuple{o.window.start, o.window.end, id};
    };
    for (int id : item.member_task_ids)
        if (key(id) < key(best)) best = id;
    return best;
}

int latest_member(const ScheduledItem& item, const Instance& instance) {
    int best = item.member_task_ids.front();
    auto key = [&](int id) {
        const Opportunity& o = instance.opportunity(*instance.find_opportunity(id, item.orbit_id));
        return std::tuple{o.window.end, o.window.start, id};
    };
    for (int id : item.member_task_ids)
        if (key(id) > key(best)) best = id;
    return best;
}

struct EvictionUnit {
    int item_pos;
    bool whole;     // remove the whole item (singletons, opening-count overruns)
    int member_id;  // endpoint component when !whole, any member when whole
};

// Applies an eviction to the item list and records the removed task ids.
void apply_eviction(std::vector<ScheduledItem>& items, const EvictionUnit& unit,
                    const Instance& instance, std::vector<int>* removed) {
    ScheduledItem& item = items[unit.item_pos];
    if (unit.whole || item.member_task_ids.size() == 1) {
        if (removed)
            removed->insert(removed->end(), item.member_task_ids.begin(),
                            item.member_task_ids.end());
        items.erase(items.begin() + unit.item_pos);
    } else {
        auto it = std::find(item.member_task_ids.begin(), item.member_task_ids.end(),
                            unit.member_id);
        item.member_task_ids.erase(it);
        recompute_item(item, instance);
        if (removed) removed->push_back(unit.member_id);
        sort_orbit(items);
    }
}

int find_item_with_member(const std::vector<ScheduledItem>& items, int member_id) {
    for (std::size_t pos = 0; pos < items.size(); ++pos)
        for (int id : items[pos].member_task_ids)
            if (id == member_id) return static_cast<int>(pos);
    return -1;
}

double eviction_score(const std::vector<ScheduledItem>& items, const EvictionUnit& unit,
                      const Orbit& orbit, const ResourceWeights& weights, int* weight_out,
                      const Instance& instance) {
    std::vector<ScheduledItem> after = items;
    apply_eviction(after, unit, instance, nullptr);
    const OrbitUsage before = orbit_usage(items, orbit);
    const OrbitUsage post = orbit_usage(after, orbit);
    const double energy_share = orbit.energy_capacity > 0
                                    ? (before.energy - post.energy) / orbit.energy_capacity
                                    : before.energy - post.energy;
    const double memory_share = orbit.memory_capacity > 0
                                    ? (before.memory - post.memory) / orbit.memory_capacity
                                    : before.memory - post.memory;
    int weight = 0;
    if (unit.whole || items[unit.item_pos].member_task_ids.size() == 1)
        weight = items[unit.item_pos].weight;
    else
        weight = instance.task(unit.member_id).weight;
    if (weight_out) *weight_out = weight;
    return weight / (weights.alpha * energy_share + weights.beta * memory_share + kWeightFloor);
}

// The endpoint unit of `items[pos]` facing a conflict on the given side:
// trimming the latest member shortens the item from the right, the earliest
// member from the left. Singletons are removed whole.
EvictionUnit facing_unit(const std::vector<ScheduledItem>& items, int pos, bool trim_right,
                         const Instance& instance) {
    const ScheduledItem& item = items[pos];
    if (item.member_task_ids.size() == 1) return {pos, true, item.member_task_ids.front()};
    return {pos, false, trim_right ? latest_member(item, instance) : earliest_member(item, instance)};
}

}  // namespace

void repair(Schedule& schedule, int orbit_id, int protected_member, const Instance& instance,
            const ResourceWeights& weights, std::vector<int>& removed) {
    std::vector<ScheduledItem>& items = schedule.items_by_orbit[orbit_id];
    const Orbit& orbit = instance.orbit(orbit_id);

    for (;;) {
        const int protected_pos =
            protected_member >= 0 ? find_item_with_member(items, protected_member) : -1;

        // Setup-gap conflicts first.
        int gap_pos = -1;
        for (std::size_t i = 0; i + 1 < items.size(); ++i)
            if (!setup_gap_ok(items[i], items[i + 1], orbit)) {
                gap_pos = static_cast<int>(i);
                break;
            }
        if (gap_pos >= 0) {
            const int prev = gap_pos;
            const int next = gap_pos + 1;
            EvictionUnit victim{};
            if (prev == protected_pos) {
                victim = facing_unit(items, next, false, instance);
            } else if (next == protected_pos) {
                victim = facing_unit(items, prev, true, instance);
            } else {
                EvictionUnit a = facing_unit(items, prev, true, instance);
                EvictionUnit b = facing_unit(items, next, false, instance);
                int wa = 0, wb = 0;
                const double sa = eviction_score(items, a, orbit, weights, &wa, instance);
                const double sb = eviction_score(items, b, orbit, weights, &wb, instance);
                victim = std::tie(sa, wa) <= std::tie(sb, wb) ? a : b;
            }
            apply_eviction(items, victim, instance, &removed);
            continue;
        }

        // Capacity and opening-count overruns.
        const OrbitUsage usage = orbit_usage(items, orbit);
        const bool over_energy = usage.energy > orbit.energy_capacity + kEps;
        const bool over_memory = usage.memory > orbit.memory_capacity + kEps;
        const bool over_count = static_cast<int>(items.size()) > orbit.max_openings;
        if (!over_energy && !over_memory && !over_count) return;

        std::vector<EvictionUnit> candidates;
        for (std::size_t pos = 0; pos < items.size(); ++pos) {
            if (static_cast<int>(pos) == protected_pos) continue;
            const ScheduledItem& item = items[pos];
            if (item.member_task_ids.size() == 1) {
                candidates.push_back({static_cast<int>(pos), true, item.member_task_ids.front()});
                continue;
            }
            if (over_count)
                candidates.push_back({static_cast<int>(pos), true, item.member_task_ids.front()});
            if (over_energy || over_memory) {
                candidates.push_back(
                    {static_cast<int>(pos), false, earliest_member(item, instance)});
                candidates.push_back({static_cast<int>(pos), false, latest_member(item, instance)});
            }
        }
        if (candidates.empty())
            throw ValidationError("repair: orbit " + std::to_string(orbit_id) +
                                  " infeasible with only the protected item left");

        const EvictionUnit* best = nullptr;
        double best_score = 0.0;
        int best_weight = 0;
        for (const EvictionUnit& unit : candidates) {
            int weight = 0;
            const double score = eviction_score(items, unit, orbit, weights, &weight, instance);
            if (!best || std::tie(score, weight, unit.item_pos, unit.member_id) <
                             std::tie(best_score, best_weight, best->item_pos, best->member_id)) {
                best = &unit;
                best_score = score;
                best_weight = weight;
            }
        }
        apply_eviction(items, *best, instance, &removed);
    }
}

namespace {

// An observation is only placeable if it fits the orbit's capacities all
// by itself; nothing can be evicted to make it fit otherwise.
bool fits_alone(const TimeWindow& window, const Orbit& orbit) {
    const double len = static_cast<double>(window.length());
    return orbit.obs_energy_rate * len <= orbit.energy_capacity + kEps &&
           orbit.memory_rate * len <= orbit.memory_capacity + kEps && orbit.max_openings >= 1;
}

double orbit_richness(const Schedule& schedule, int orbit_id, const Instance& instance) {
    const Orbit& orbit = instance.orbit(orbit_id);
    const OrbitUsage usage = orbit_usage(schedule.items_by_orbit[orbit_id], orbit);
    const double energy_part =
        orbit.energy_capacity > 0 ? (orbit.energy_capacity - usage.energy) / orbit.energy_capacity
                                  : 0.0;
    const double memory_part =
        orbit.memory_capacity > 0 ? (orbit.memory_capacity - usage.memory) / orbit.memory_capacity
                                  : 0.0;
    return energy_part + memory_part;
}

std::vector<char> scheduled_mask(const Schedule& schedule, const Instance& instance) {
    std::vector<char> mask(instance.task_count(), 0);
    for (const auto& items : schedule.items_by_orbit)
        for (const ScheduledItem& item : items)
            for (int id : item.member_task_ids) mask[id] = 1;
    return mask;
}

std::vector<int> evicted_tasks(const Schedule& before, const Schedule& after) {
    std::vector<int> a = before.scheduled_task_ids();
    std::vector<int> b = after.scheduled_task_ids();
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

std::optional<Move> insert_task(const Schedule& schedule, int task_id, const Instance& instance,
                                std::span<const ResourceWeights> weights, bool allow_clustering,
                                int exclude_orbit) {
    struct Option {
        int opp_index;
        int orbit_id;
        int partner_pos = -1;
        TimeSec merged_span = 0;
        int partner_weight = 0;
    };
    std::vector<Option> isolated;
    std::vector<Option> clusterable;

    for (int opp_index : instance.opportunities_of_task(task_id)) {
        const Opportunity& opp = instance.opportunity(opp_index);
        if (opp.orbit_id == exclude_orbit) continue;
        const Orbit& orbit = instance.orbit(opp.orbit_id);
        if (!fits_alone(opp.window, orbit)) continue;
        isolated.push_back({opp_index, opp.orbit_id});

        if (!allow_clustering) continue;
        const auto& items = schedule.items_by_orbit[opp.orbit_id];
        Option best{opp_index, opp.orbit_id};
        for (std::size_t pos = 0; pos < items.size(); ++pos) {
            const ClusterOutcome outcome =
                try_cluster(items[pos], opp, instance, weights[opp.orbit_id]);
            if (!outcome.ok()) continue;
            if (!fits_alone(outcome.item->window, orbit)) continue;
            const TimeSec span = outcome.item->window.length();
            const int pos_int = static_cast<int>(pos);
            if (best.partner_pos < 0 ||
                std::tie(span, items[pos].weight, pos_int) <
                    std::tie(best.merged_span, best.partner_weight, best.partner_pos)) {
                best.partner_pos = pos_int;
                best.merged_span = span;
                best.partner_weight = items[pos].weight;
            }
        }
        if (best.partner_pos >= 0) clusterable.push_back(best);
    }
    if (isolated.empty()) return std::nullopt;

    auto pick_richest = [&](const std::vector<Option>& options) -> const Option& {
        const Option* best = &options.front();
        double best_richness = orbit_richness(schedule, best->orbit_id, instance);
        for (std::size_t i = 1; i < options.size(); ++i) {
            const double r = orbit_richness(schedule, options[i].orbit_id, instance);
            if (r > best_richness + kEps ||
                (r > best_richness - kEps && options[i].orbit_id < best->orbit_id)) {
                best = &options[i];
                best_richness = r;
            }
        }
        return *best;
    };

    Schedule candidate = schedule;
    int target_orbit;
    if (!clusterable.empty()) {
        const Option& opt = clusterable.size() == 1 ? clusterable.front() : pick_richest(clusterable);
        target_orbit = opt.orbit_id;
        auto& items = candidate.items_by_orbit[target_orbit];
        const Opportunity& opp = instance.opportunity(opt.opp_index);
        ClusterOutcome outcome =
            try_cluster(items[opt.partner_pos], opp, instance, weights[target_orbit]);
        if (!outcome.ok()) throw Error("insert_task: cluster recomputation diverged");
        items.erase(items.begin() + opt.partner_pos);
        insert_sorted(items, std::move(*outcome.item));
    } else {
        const Option& opt = pick_richest(isolated);
        target_orbit = opt.orbit_id;
        insert_sorted(candidate.items_by_orbit[target_orbit],
                      singleton_item(instance.opportunity(opt.opp_index), instance));
    }

    std::vector<int> evicted;
    repair(candidate, target_orbit, task_id, instance, weights[target_orbit], evicted);
    std::sort(evicted.begin(), evicted.end());
    return Move{MoveKind::INSERT_REMOVE, std::move(candidate), std::move(evicted)};
}

std::optional<Move> insertion_removal(const Schedule& schedule, const Instance& instance,
                                      const TabuList& tabu,
                                      std::span<const ResourceWeights> weights, Rng& /*rng*/,
                                      bool allow_clustering) {
    const std::vector<char> mask = scheduled_mask(schedule, instance);
    for (int task_id : instance.tasks_by_weight()) {
        if (mask[task_id] || tabu.contains(task_id)) continue;
        auto move = insert_task(schedule, task_id, instance, weights, allow_clustering);
        if (move) return move;
    }
    return std::nullopt;
}

namespace {

bool conflicts_with_item(const Opportunity& opp, const ScheduledItem& item, const Orbit& orbit,
                         const Instance& instance) {
    ScheduledItem entrant = singleton_item(opp, instance);
    const bool entrant_after =
        std::tie(item.window.start, item.window.end) <=
        std::tie(entrant.window.start, entrant.window.end);
    return entrant_after ? !setup_gap_ok(item, entrant, orbit)
                         : !setup_gap_ok(entrant, item, orbit);
}

// Unscheduled tasks whose only way onto this orbit collides with the item,
// in descending weight order.
std::vector<int> setup_conflictors(const ScheduledItem& item, int orbit_id,
                                   const std::vector<char>& mask, const Instance& instance) {
    std::vector<int> out;
    const Orbit& orbit = instance.orbit(orbit_id);
    for (int opp_index : instance.opportunities_on_orbit(orbit_id)) {
        const Opportunity& opp = instance.opportunity(opp_index);
        if (mask[opp.task_id]) continue;
        if (conflicts_with_item(opp, item, orbit, instance)) out.push_back(opp.task_id);
    }
    std::sort(out.begin(), out.end(), [&](int a, int b) {
        const int wa = instance.task(a).weight;
        const int wb = instance.task(b).weight;
        return wa != wb ? wa > wb : a < b;
    });
    return out;
}

bool try_feasible_singleton_insert(Schedule& schedule, int task_id, int orbit_id,
                                   const Instance& instance) {
    const auto opp_index = instance.find_opportunity(task_id, orbit_id);
    if (!opp_index) return false;
    const Orbit& orbit = instance.orbit(orbit_id);
    const Opportunity& opp = instance.opportunity(*opp_index);
    if (!fits_alone(opp.window, orbit)) return false;

    std::vector<ScheduledItem> trial = schedule.items_by_orbit[orbit_id];
    insert_sorted(trial, singleton_item(opp, instance));
    if (static_cast<int>(trial.size()) > orbit.max_openings) return false;
    for (std::size_t i = 0; i + 1 < trial.size(); ++i)
        if (!setup_gap_ok(trial[i], trial[i + 1], orbit)) return false;
    const OrbitUsage usage = orbit_usage(trial, orbit);
    if (usage.energy > orbit.energy_capacity + kEps) return false;
    if (usage.memory > orbit.memory_capacity + kEps) return false;

    schedule.items_by_orbit[orbit_id] = std::move(trial);
    return true;
}

}  // namespace

std::optional<Move> migration(const Schedule& schedule, const Instance& instance,
                              const TabuList& tabu, std::span<const ResourceWeights> weights,
                              Rng& /*rng*/, bool allow_clustering) {
    const std::vector<char> mask = scheduled_mask(schedule, instance);

    struct Candidate {
        int task_id;
        int orbit_id;
        int item_pos;
        int conflicts;
    };
    std::vector<Candidate> candidates;
    for (int j = 0; j < instance.orbit_count(); ++j) {
        const auto& items = schedule.items_by_orbit[j];
        for (std::size_t pos = 0; pos < items.size(); ++pos) {
            const int count =
                static_cast<int>(setup_conflictors(items[pos], j, mask, instance).size());
            for (int member : items[pos].member_task_ids)
                candidates.push_back({member, j, static_cast<int>(pos), count});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.conflicts != b.conflicts ? a.conflicts > b.conflicts : a.task_id < b.task_id;
    });

    for (const Candidate& cand : candidates) {
        // The task must have a placement other than its current one.
        bool has_alternative = false;
        for (int opp_index : instance.opportunities_of_task(cand.task_id))
            if (instance.opportunity(opp_index).orbit_id != cand.orbit_id) {
                has_alternative = true;
                break;
            }
        if (!has_alternative) continue;

        const std::vector<int> conflictors =
            setup_conflictors(schedule.items_by_orbit[cand.orbit_id][cand.item_pos], cand.orbit_id,
                              mask, instance);

        // Remove the task from its current item.
        Schedule stripped = schedule;
        {
            auto& items = stripped.items_by_orbit[cand.orbit_id];
            ScheduledItem& item = items[cand.item_pos];
            if (item.member_task_ids.size() == 1) {
                items.erase(items.begin() + cand.item_pos);
            } else {
                item.member_task_ids.erase(std::find(item.member_task_ids.begin(),
                                                     item.member_task_ids.end(), cand.task_id));
                recompute_item(item, instance);
                sort_orbit(items);
            }
            // Shrinking a cluster can shift its pointing angle, so the
            // source orbit may need cleanup of its own.
            std::vector<int> evicted;
            repair(stripped, cand.orbit_id, -1, instance, weights[cand.orbit_id], evicted);
        }

        const std::vector<ResourceWeights> stripped_weights =
            resource_weights_per_orbit(stripped, instance);
        auto reinserted = insert_task(stripped, cand.task_id, instance, stripped_weights,
                                      allow_clustering, cand.orbit_id);
        if (!reinserted) continue;

        Schedule next = std::move(reinserted->candidate);
        std::vector<char> next_mask = scheduled_mask(next, instance);
        for (int u : conflictors) {
            if (tabu.contains(u) || next_mask[u]) continue;
            if (!try_feasible_singleton_insert(next, u, cand.orbit_id, instance)) break;
            next_mask[u] = 1;
        }

        std::vector<int> removed = evicted_tasks(schedule, next);
        return Move{MoveKind::MIGRATE, std::move(next), std::move(removed)};
    }
    return std::nullopt;
}

int select_structure(const NeighborhoodStats& stats, Rng& rng) {
    return rng.uniform01() < stats.probs[0] ? 1 : 2;
}

std::pair<double, double> update_probabilities(NeighborhoodStats& stats, double eta) {
    std::array<double, 2> blended;
    for (int i = 0; i < 2; ++i) {
        const double ratio =
            stats.selections[i] > 0
                ? static_cast<double>(stats.successes[i]) / static_cast<double>(stats.selections[i])
                : 0.0;
        blended[i] = eta * stats.probs[i] + (1.0 - eta) * ratio;
    }
    const double norm = blended[0] + blended[1];
    stats.probs = {blended[0] / norm, blended[1] / norm};
    stats.selections = {0, 0};
    stats.successes = {0, 0};
    return {stats.probs[0], stats.probs[1]};
}

}  // namespace sosp
