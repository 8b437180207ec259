#pragma once

#include <algorithm>
#include <vector>

#include "sosp/model.hpp"

namespace sosp::testing {

// Reference orbit used throughout the tests: memory 1000 @ 1/s, energy
// 1500 @ 1/s observing and 1/deg slewing, unit slew velocity, 10 s setup,
// 10 openings.
inline Orbit reference_orbit(int id = 0) {
    Orbit orbit;
    orbit.id = id;
    orbit.memory_capacity = 1000.0;
    orbit.memory_rate = 1.0;
    orbit.energy_capacity = 1500.0;
    orbit.obs_energy_rate = 1.0;
    orbit.slew_energy_rate = 1.0;
    orbit.slew_velocity = 1.0;
    orbit.setup_time = 10.0;
    orbit.max_openings = 10;
    return orbit;
}

struct OppSpec {
    int task;
    int orbit;
    TimeSec start;
    TimeSec end;
    double angle_lo;
    double angle_hi;
};

inline Scenario make_scenario(const std::vector<int>& weights, int n_orbits,
                              const std::vector<OppSpec>& opps, TimeSec max_cluster_duration = 120,
                              TimeSec horizon = 86400) {
    Scenario scenario;
    for (std::size_t i = 0; i < weights.size(); ++i)
        scenario.tasks.push_back({static_cast<int>(i), weights[i]});
    for (int j = 0; j < n_orbits; ++j) scenario.orbits.push_back(reference_orbit(j));
    for (const OppSpec& o : opps)
        scenario.opportunities.push_back(
            {o.task, o.orbit, {o.start, o.end}, {o.angle_lo, o.angle_hi}});
    scenario.horizon_seconds = horizon;
    scenario.max_cluster_duration = max_cluster_duration;
    return scenario;
}

// Builds an item directly from member ids, deriving the merged window,
// intersected range, midpoint angle and summed weight from the members'
// opportunities. Kept independent of the clustering code on purpose.
inline ScheduledItem build_item(const Instance& instance, int orbit_id, std::vector<int> members) {
    std::sort(members.begin(), members.end(), [&](int a, int b) {
        const Opportunity& oa = instance.opportunity(*instance.find_opportunity(a, orbit_id));
        const Opportunity& ob = instance.opportunity(*instance.find_opportunity(b, orbit_id));
        return oa.window.start != ob.window.start ? oa.window.start < ob.window.start : a < b;
    });
    ScheduledItem item;
    item.orbit_id = orbit_id;
    item.member_task_ids = members;
    bool first = true;
    for (int id : members) {
        const Opportunity& opp = instance.opportunity(*instance.find_opportunity(id, orbit_id));
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
        item.weight += instance.task(id).weight;
    }
    item.exec_angle = item.angle_range.midpoint();
    return item;
}

inline Schedule schedule_with(const Instance& instance, std::vector<ScheduledItem> items) {
    Schedule schedule = instance.empty_schedule();
    for (ScheduledItem& item : items) {
        auto& orbit_items = schedule.items_by_orbit[item.orbit_id];
        orbit_items.push_back(std::move(item));
        std::sort(orbit_items.begin(), orbit_items.end(),
                  [](const ScheduledItem& a, const ScheduledItem& b) {
                      return a.window.start < b.window.start;
                  });
    }
    return schedule;
}

}  // namespace sosp::testing
