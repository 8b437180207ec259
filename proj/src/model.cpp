#include "sosp/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

namespace sosp {

bool Schedule::empty() const {
    for (const auto& items : items_by_orbit)
        if (!items.empty()) return false;
    return true;
}

std::vector<int> Schedule::scheduled_task_ids() const {
    std::vector<int> ids;
    for (const auto& items : items_by_orbit)
        for (const auto& item : items)
            ids.insert(ids.end(), item.member_task_ids.begin(), item.member_task_ids.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::vector<std::string> scenario_problems(const Scenario& scenario) {
    std::vector<std::string> problems;
    auto note = [&](const std::string& msg) { problems.push_back(msg); };

    for (std::size_t i = 0; i < scenario.tasks.size(); ++i) {
        const TaskSpec& t = scenario.tasks[i];
        if (t.id != static_cast<int>(i))
            note("tasks[" + std::to_string(i) + "]: id " + std::to_string(t.id) +
                 " must equal its position " + std::to_string(i));
        if (t.weight < 1)
            note("tasks[" + std::to_string(i) + "]: weight must be >= 1");
    }
    for (std::size_t j = 0; j < scenario.orbits.size(); ++j) {
        const Orbit& o = scenario.orbits[j];
        const std::string ctx = "orbits[" + std::to_string(j) + "]";
        if (o.id != static_cast<int>(j))
            note(ctx + ": id " + std::to_string(o.id) + " must equal its position");
        if (o.memory_capacity < 0 || o.memory_rate < 0 || o.energy_capacity < 0 ||
            o.obs_energy_rate < 0 || o.slew_energy_rate < 0 || o.setup_time < 0)
            note(ctx + ": capacities and rates must be non-negative");
        if (!(o.slew_velocity > 0)) note(ctx + ": slew_velocity must be > 0");
        if (o.max_openings < 1) note(ctx + ": max_openings must be >= 1");
    }
    std::set<std::pair<int, int>> seen_pairs;
    for (std::size_t k = 0; k < scenario.opportunities.size(); ++k) {
        const Opportunity& opp = scenario.opportunities[k];
        const std::string ctx = "opportunities[" + std::to_string(k) + "]";
        if (opp.task_id < 0 || opp.task_id >= static_cast<int>(scenario.tasks.size()))
            note(ctx + ": unknown task id " + std::to_string(opp.task_id));
        if (opp.orbit_id < 0 || opp.orbit_id >= static_cast<int>(scenario.orbits.size()))
            note(ctx + ": unknown orbit id " + std::to_string(opp.orbit_id));
        if (opp.window.start >= opp.window.end)
            note(ctx + ": window end (" + std::to_string(opp.window.end) +
                 ") must be greater than start (" + std::to_string(opp.window.start) + ")");
        if (opp.angle_range.lo > opp.angle_range.hi)
            note(ctx + ": angle range is inverted");
        if (!seen_pairs.insert({opp.task_id, opp.orbit_id}).second)
            note(ctx + ": duplicate (task " + std::to_string(opp.task_id) + ", orbit " +
                 std::to_string(opp.orbit_id) + ") visibility");
    }
    if (scenario.max_cluster_duration <= 0)
        note("max_cluster_duration must be > 0");
    if (scenario.horizon_seconds <= 0)
        note("horizon_seconds must be > 0");
    return problems;
}

Instance::Instance(Scenario scenario) : scenario_(std::move(scenario)) {
    auto problems = scenario_problems(scenario_);
    if (!problems.empty()) throw ValidationError(problems.front());

    by_task_.resize(scenario_.tasks.size());
    by_orbit_.resize(scenario_.orbits.size());
    for (std::size_t k = 0; k < scenario_.opportunities.size(); ++k) {
        const Opportunity& opp = scenario_.opportunities[k];
        by_task_[opp.task_id].push_back(static_cast<int>(k));
        by_orbit_[opp.orbit_id].push_back(static_cast<int>(k));
    }
    for (auto& opps : by_orbit_) {
        std::sort(opps.begin(), opps.end(), [&](int a, int b) {
            const Opportunity& oa = scenario_.opportunities[a];
            const Opportunity& ob = scenario_.opportunities[b];
            return std::tie(oa.window.start, oa.window.end, oa.task_id) <
                   std::tie(ob.window.start, ob.window.end, ob.task_id);
        });
    }

    for (const TaskSpec& t : scenario_.tasks)
        if (!by_task_[t.id].empty()) tasks_by_weight_.push_back(t.id);
    std::sort(tasks_by_weight_.begin(), tasks_by_weight_.end(), [&](int a, int b) {
        const int wa = scenario_.tasks[a].weight;
        const int wb = scenario_.tasks[b].weight;
        return wa != wb ? wa > wb : a < b;
    });
}

const TaskSpec& Instance::task(int task_id) const {
    if (task_id < 0 || task_id >= task_count())
        throw ArgumentError("unknown task id " + std::to_string(task_id));
    return scenario_.tasks[task_id];
}

const Orbit& Instance::orbit(int orbit_id) const {
    if (orbit_id < 0 || orbit_id >= orbit_count())
        throw ArgumentError("unknown orbit id " + std::to_string(orbit_id));
    return scenario_.orbits[orbit_id];
}

const std::vector<int>& Instance::opportunities_of_task(int task_id) const {
    task(task_id);
    return by_task_[task_id];
}

const std::vector<int>& Instance::opportunities_on_orbit(int orbit_id) const {
    orbit(orbit_id);
    return by_orbit_[orbit_id];
}

std::optional<int> Instance::find_opportunity(int task_id, int orbit_id) const {
    if (task_id < 0 || task_id >= task_count()) return std::nullopt;
    for (int k : by_task_[task_id])
        if (scenario_.opportunities[k].orbit_id == orbit_id) return k;
    return std::nullopt;
}

Schedule Instance::empty_schedule() const {
    Schedule s;
    s.items_by_orbit.resize(scenario_.orbits.size());
    return s;
}

std::string to_string(ConstraintId id) {
    switch (id) {
        case ConstraintId::EQ2: return "EQ2";
        case ConstraintId::EQ3: return "EQ3";
        case ConstraintId::EQ4: return "EQ4";
        case ConstraintId::EQ5: return "EQ5";
        case ConstraintId::EQ6: return "EQ6";
        case ConstraintId::CLUSTER: return "CLUSTER";
    }
    return "?";
}

long long objective(const Schedule& schedule, const Instance& instance) {
    long long profit = 0;
    for (const auto& items : schedule.items_by_orbit)
        for (const ScheduledItem& item : items)
            for (int task_id : item.member_task_ids) {
                if (task_id < 0 || task_id >= instance.task_count())
                    throw ArgumentError("schedule references unknown task id " +
                                        std::to_string(task_id));
                profit += instance.task(task_id).weight;
            }
    return profit;
}

bool setup_gap_ok(const ScheduledItem& prev, const ScheduledItem& next, const Orbit& orbit) {
    const double gap = static_cast<double>(next.window.start - prev.window.end);
    const double required =
        orbit.setup_time + (std::abs(prev.exec_angle) + std::abs(next.exec_angle)) / orbit.slew_velocity;
    return gap >= required - kEps;
}

OrbitUsage orbit_usage(const std::vector<ScheduledItem>& items, const Orbit& orbit) {
    OrbitUsage usage;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const double len = static_cast<double>(items[i].window.length());
        usage.energy += orbit.obs_energy_rate * len;
        usage.memory += orbit.memory_rate * len;
        if (i + 1 < items.size())
            usage.energy += orbit.slew_energy_rate *
                            (std::abs(items[i].exec_angle) + std::abs(items[i + 1].exec_angle)) /
                            orbit.slew_velocity;
    }
    return usage;
}

OrbitUsage total_usage(const Schedule& schedule, const Instance& instance) {
    OrbitUsage total;
    for (int j = 0; j < instance.orbit_count(); ++j) {
        const OrbitUsage u = orbit_usage(schedule.items_by_orbit[j], instance.orbit(j));
        total.energy += u.energy;
        total.memory += u.memory;
    }
    return total;
}

namespace {

std::string describe_window(const TimeWindow& w) {
    return "[" + std::to_string(w.start) + "," + std::to_string(w.end) + "]";
}

void check_item_consistency(const ScheduledItem& item, int orbit_id, int pos,
                            const Instance& instance, std::vector<Violation>& out) {
    auto flag = [&](int task_id, const std::string& detail) {
        out.push_back({ConstraintId::CLUSTER, orbit_id, pos, task_id, detail});
    };

    if (item.member_task_ids.empty()) {
        flag(-1, "item has no members");
        return;
    }
    if (item.orbit_id != orbit_id) {
        flag(-1, "item orbit_id " + std::to_string(item.orbit_id) + " stored under orbit " +
                     std::to_string(orbit_id));
        return;
    }

    TimeWindow merged{};
    AngleRange intersected{};
    int weight_sum = 0;
    bool first = true;
    TimeSec prev_member_start = 0;
    for (int task_id : item.member_task_ids) {
        auto opp_index = instance.find_opportunity(task_id, orbit_id);
        if (task_id < 0 || task_id >= instance.task_count() || !opp_index) {
            flag(task_id, "member has no visibility on this orbit");
            return;
        }
        const Opportunity& opp = instance.opportunity(*opp_index);
        if (first) {
            merged = opp.window;
            intersected = opp.angle_range;
            first = false;
        } else {
            if (opp.window.start < prev_member_start)
                flag(task_id, "members not ordered by window start");
            merged.start = std::min(merged.start, opp.window.start);
            merged.end = std::max(merged.end, opp.window.end);
            intersected.lo = std::max(intersected.lo, opp.angle_range.lo);
            intersected.hi = std::min(intersected.hi, opp.angle_range.hi);
        }
        prev_member_start = opp.window.start;
        weight_sum += instance.task(task_id).weight;
    }

    if (item.window != merged)
        flag(-1, "window " + describe_window(item.window) + " differs from member span " +
                     describe_window(merged));
    if (std::abs(item.angle_range.lo - intersected.lo) > kEps ||
        std::abs(item.angle_range.hi - intersected.hi) > kEps)
        flag(-1, "angle range differs from member intersection");
    if (intersected.lo > intersected.hi + kEps)
        flag(-1, "member angle ranges do not intersect");
    if (std::abs(item.exec_angle - item.angle_range.midpoint()) > kEps)
        flag(-1, "exec angle is not the range midpoint");
    if (item.weight != weight_sum)
        flag(-1, "weight " + std::to_string(item.weight) + " differs from member sum " +
                     std::to_string(weight_sum));
    if (item.is_cluster() && item.window.length() > instance.scenario().max_cluster_duration)
        flag(-1, "cluster span " + std::to_string(item.window.length()) +
                     " exceeds the duration cap");
}

}  // namespace

std::vector<Violation> validate(const Schedule& schedule, const Instance& instance) {
    std::vector<Violation> out;
    if (schedule.items_by_orbit.size() != static_cast<std::size_t>(instance.orbit_count())) {
        out.push_back({ConstraintId::CLUSTER, -1, -1, -1,
                       "schedule has " + std::to_string(schedule.items_by_orbit.size()) +
                           " orbit lists, scenario has " + std::to_string(instance.orbit_count())});
        return out;
    }

    // Duplicate task assignments across all items.
    std::unordered_set<int> seen;
    for (int j = 0; j < instance.orbit_count(); ++j) {
        const auto& items = schedule.items_by_orbit[j];
        for (std::size_t pos = 0; pos < items.size(); ++pos)
            for (int task_id : items[pos].member_task_ids)
                if (!seen.insert(task_id).second)
                    out.push_back({ConstraintId::EQ2, j, static_cast<int>(pos), task_id,
                                   "task assigned more than once"});
    }

    for (int j = 0; j < instance.orbit_count(); ++j) {
        const auto& items = schedule.items_by_orbit[j];
        const Orbit& orbit = instance.orbit(j);

        for (std::size_t pos = 0; pos + 1 < items.size(); ++pos)
            if (!setup_gap_ok(items[pos], items[pos + 1], orbit))
                out.push_back({ConstraintId::EQ3, j, static_cast<int>(pos + 1), -1,
                               "setup gap before this item is too small"});

        const OrbitUsage usage = orbit_usage(items, orbit);
        if (usage.energy > orbit.energy_capacity + kEps)
            out.push_back({ConstraintId::EQ4, j, -1, -1,
                           "energy " + std::to_string(usage.energy) + " exceeds capacity " +
                               std::to_string(orbit.energy_capacity)});
        if (usage.memory > orbit.memory_capacity + kEps)
            out.push_back({ConstraintId::EQ5, j, -1, -1,
                           "memory " + std::to_string(usage.memory) + " exceeds capacity " +
                               std::to_string(orbit.memory_capacity)});
        if (static_cast<int>(items.size()) > orbit.max_openings)
            out.push_back({ConstraintId::EQ6, j, -1, -1,
                           std::to_string(items.size()) + " openings exceed the cap of " +
                               std::to_string(orbit.max_openings)});

        for (std::size_t pos = 0; pos < items.size(); ++pos)
            check_item_consistency(items[pos], j, static_cast<int>(pos), instance, out);
    }

    std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.constraint, a.orbit_id, a.item_index) <
               std::tie(b.constraint, b.orbit_id, b.item_index);
    });
    return out;
}

ScheduledItem singleton_item(const Opportunity& opp, const Instance& instance) {
    ScheduledItem item;
    item.orbit_id = opp.orbit_id;
    item.member_task_ids = {opp.task_id};
    item.window = opp.window;
    item.angle_range = opp.angle_range;
    item.exec_angle = opp.angle_range.midpoint();
    item.weight = instance.task(opp.task_id).weight;
    return item;
}

}  // namespace sosp
