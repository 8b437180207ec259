#include "sosp/clustering.hpp"

#include <algorithm>
#include <cmath>

namespace sosp {

ResourceWeights resource_weights(double consumed_energy, double energy_capacity,
                                 double consumed_memory, double memory_capacity) {
    ResourceWeights w;
    w.alpha = std::max(kWeightFloor, energy_capacity > 0 ? consumed_energy / energy_capacity : 1.0);
    w.beta = std::max(kWeightFloor, memory_capacity > 0 ? consumed_memory / memory_capacity : 1.0);
    return w;
}

std::vector<ResourceWeights> resource_weights_per_orbit(const Schedule& schedule,
                                                        const Instance& instance) {
    std::vector<ResourceWeights> weights(instance.orbit_count());
    for (int j = 0; j < instance.orbit_count(); ++j) {
        const Orbit& orbit = instance.orbit(j);
        const OrbitUsage usage = orbit_usage(schedule.items_by_orbit[j], orbit);
        weights[j] = resource_weights(usage.energy, orbit.energy_capacity, usage.memory,
                                      orbit.memory_capacity);
    }
    return weights;
}

std::optional<AngleRange> intersect_ranges(std::span<const AngleRange> ranges) {
    if (ranges.empty()) throw ArgumentError("intersect_ranges: empty input");
    AngleRange out = ranges.front();
    for (const AngleRange& r : ranges.subspan(1)) {
        out.lo = std::max(out.lo, r.lo);
        out.hi = std::min(out.hi, r.hi);
    }
    if (out.width() < kEps) return std::nullopt;
    return out;
}

TimeWindow merge_windows(std::span<const TimeWindow> windows) {
    if (windows.empty()) throw ArgumentError("merge_windows: empty input");
    TimeWindow out = windows.front();
    for (const TimeWindow& w : windows.subspan(1)) {
        out.start = std::min(out.start, w.start);
        out.end = std::max(out.end, w.end);
    }
    return out;
}

ClusterCost resource_delta(const TimeWindow& window_a, double angle_a,
                           const TimeWindow& window_b, double angle_b,
                           const TimeWindow& merged, double merged_angle, const Orbit& orbit) {
    const double len_a = static_cast<double>(window_a.length());
    const double len_b = static_cast<double>(window_b.length());
    const double len_merged = static_cast<double>(merged.length());
    ClusterCost cost;
    cost.separate_energy = orbit.obs_energy_rate * (len_a + len_b) +
                           orbit.slew_energy_rate * (std::abs(angle_a) + std::abs(angle_b)) /
                               orbit.slew_velocity;
    cost.separate_memory = orbit.memory_rate * (len_a + len_b);
    cost.clustered_energy = orbit.obs_energy_rate * len_merged +
                            orbit.slew_energy_rate * std::abs(merged_angle) / orbit.slew_velocity;
    cost.clustered_memory = orbit.memory_rate * len_merged;
    return cost;
}

bool worthwhile(const ClusterCost& cost, const ResourceWeights& weights) {
    return weights.alpha * cost.clustered_energy + weights.beta * cost.clustered_memory <
           weights.alpha * cost.separate_energy + weights.beta * cost.separate_memory;
}

ClusterOutcome try_cluster(const ScheduledItem& item, const Opportunity& opp,
                           const Instance& instance, const ResourceWeights& weights) {
    if (opp.orbit_id != item.orbit_id)
        throw ArgumentError("try_cluster: opportunity is on a different orbit");
    if (std::find(item.member_task_ids.begin(), item.member_task_ids.end(), opp.task_id) !=
        item.member_task_ids.end())
        throw ArgumentError("try_cluster: task already a member of the item");

    const AngleRange ranges[2] = {item.angle_range, opp.angle_range};
    const auto intersected = intersect_ranges(ranges);
    if (!intersected) return {std::nullopt, ClusterReject::ANGLE};

    const TimeWindow windows[2] = {item.window, opp.window};
    const TimeWindow merged = merge_windows(windows);
    if (merged.length() > instance.scenario().max_cluster_duration)
        return {std::nullopt, ClusterReject::DURATION};

    const double merged_angle = intersected->midpoint();
    const ClusterCost cost = resource_delta(item.window, item.exec_angle, opp.window,
                                            opp.angle_range.midpoint(), merged, merged_angle,
                                            instance.orbit(opp.orbit_id));
    if (!worthwhile(cost, weights)) return {std::nullopt, ClusterReject::WORTH};

    ScheduledItem out = item;
    out.window = merged;
    out.angle_range = *intersected;
    out.exec_angle = merged_angle;
    out.weight = item.weight + instance.task(opp.task_id).weight;
    // Keep members ordered by their opportunity window start.
    const TimeSec new_start = opp.window.start;
    auto insert_at = out.member_task_ids.begin();
    while (insert_at != out.member_task_ids.end()) {
        const auto existing = instance.find_opportunity(*insert_at, item.orbit_id);
        if (existing && instance.opportunity(*existing).window.start > new_start) break;
        ++insert_at;
    }
    out.member_task_ids.insert(insert_at, opp.task_id);
    return {std::move(out), ClusterReject::ANGLE};
}

}  // namespace sosp
