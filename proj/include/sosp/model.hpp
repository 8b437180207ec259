#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sosp/core.hpp"

namespace sosp {

using TimeSec = long long;

struct TimeWindow {
    TimeSec start = 0;
    TimeSec end = 0;

    TimeSec length() const { return end - start; }
    bool operator==(const TimeWindow&) const = default;
};

struct AngleRange {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool operator==(const AngleRange&) const = default;
};

struct TaskSpec {
    int id = 0;
    int weight = 1;  // observation profit, >= 1

    bool operator==(const TaskSpec&) const = default;
};

/// One orbit of one satellite, treated as an independent resource.
struct Orbit {
    int id = 0;
    double memory_capacity = 0.0;   // storage budget for the whole pass
    double memory_rate = 0.0;       // storage consumed per observation second
    double energy_capacity = 0.0;   // energy budget for the whole pass
    double obs_energy_rate = 0.0;   // energy per observation second
    double slew_energy_rate = 0.0;  // energy per unit of slewing effort
    double slew_velocity = 1.0;     // degrees per second, > 0
    double setup_time = 0.0;        // sensor opening/calibration gap, seconds
    int max_openings = 1;           // cap on scheduled items for this orbit

    bool operator==(const Orbit&) const = default;
};

/// One (task, orbit) visibility: a time-window plus the slewing-angle range
/// from which the target can be imaged during that pass.
struct Opportunity {
    int task_id = 0;
    int orbit_id = 0;
    TimeWindow window;
    AngleRange angle_range;

    bool operator==(const Opportunity&) const = default;
};

/// Immutable problem instance. Task and orbit ids are dense: id == index.
struct Scenario {
    std::vector<TaskSpec> tasks;
    std::vector<Orbit> orbits;
    std::vector<Opportunity> opportunities;
    TimeSec horizon_seconds = 0;
    TimeSec max_cluster_duration = 0;  // longest allowed continuous observation

    bool operator==(const Scenario&) const = default;
};

/// One sensor opening: a single task or several merged into one observation.
/// The window spans all members, the angle range is the intersection of the
/// member ranges, and the sensor points at the range midpoint.
struct ScheduledItem {
    int orbit_id = 0;
    std::vector<int> member_task_ids;  // ordered by member window start
    TimeWindow window;
    AngleRange angle_range;
    double exec_angle = 0.0;
    int weight = 0;  // sum of member weights

    bool is_cluster() const { return member_task_ids.size() > 1; }
    bool operator==(const ScheduledItem&) const = default;
};

/// Per-orbit item sequences, each kept sorted by window start.
struct Schedule {
    std::vector<std::vector<ScheduledItem>> items_by_orbit;

    bool empty() const;
    /// Distinct scheduled initial task ids, ascending.
    std::vector<int> scheduled_task_ids() const;

    bool operator==(const Schedule&) const = default;
};

/// Returns a human-readable description of every broken Scenario invariant
/// (empty means the scenario is well formed).
std::vector<std::string> scenario_problems(const Scenario& scenario);

// A Scenario plus the lookup tables every solver needs: opportunities by
// task, by orbit, and by (task, orbit) pair, and the static task order used
// for greedy passes. Construction throws ValidationError if the scenario
// breaks an invariant.
class Instance {
  public:
    explicit Instance(Scenario scenario);

    const Scenario& scenario() const { return scenario_; }
    int task_count() const { return static_cast<int>(scenario_.tasks.size()); }
    int orbit_count() const { return static_cast<int>(scenario_.orbits.size()); }

    const TaskSpec& task(int task_id) const;
    const Orbit& orbit(int orbit_id) const;
    const Opportunity& opportunity(int opp_index) const { return scenario_.opportunities[opp_index]; }

    const std::vector<int>& opportunities_of_task(int task_id) const;
    const std::vector<int>& opportunities_on_orbit(int orbit_id) const;
    /// Index of the unique (task, orbit) opportunity, or nullopt.
    std::optional<int> find_opportunity(int task_id, int orbit_id) const;

    /// All task ids with at least one opportunity, by descending weight,
    /// ties broken by ascending id.
    const std::vector<int>& tasks_by_weight() const { return tasks_by_weight_; }

    Schedule empty_schedule() const;

  private:
    Scenario scenario_;
    std::vector<std::vector<int>> by_task_;
    std::vector<std::vector<int>> by_orbit_;
    std::vector<int> tasks_by_weight_;
};

enum class ConstraintId {
    EQ2,      // a task assigned to more than one item
    EQ3,      // setup gap between consecutive items too small
    EQ4,      // orbit energy capacity exceeded
    EQ5,      // orbit memory capacity exceeded
    EQ6,      // orbit opening count exceeded
    CLUSTER,  // item fields inconsistent with its members
};

std::string to_string(ConstraintId id);

struct Violation {
    ConstraintId constraint;
    int orbit_id = -1;    // -1 when not orbit-specific
    int item_index = -1;  // position within the orbit list, -1 if n/a
    int task_id = -1;     // offending task, -1 if n/a
    std::string detail;
};

/// Total profit: the summed weight of every member task of every item.
/// Throws ArgumentError if an item references an unknown task id.
long long objective(const Schedule& schedule, const Instance& instance);

/// Setup-time feasibility for two consecutive items on the same orbit.
/// The required gap covers sensor setup plus slewing through both
/// pointing angles at the orbit's slew velocity.
bool setup_gap_ok(const ScheduledItem& prev, const ScheduledItem& next, const Orbit& orbit);

struct OrbitUsage {
    double energy = 0.0;
    double memory = 0.0;
};

/// Energy and memory consumed by an ordered item sequence on one orbit.
/// Energy is observation time plus the slewing effort between consecutive
/// items; memory is observation time at the orbit's recording rate.
OrbitUsage orbit_usage(const std::vector<ScheduledItem>& items, const Orbit& orbit);

OrbitUsage total_usage(const Schedule& schedule, const Instance& instance);

/// Checks every schedule invariant and returns the violations in a
/// deterministic order (constraint id, then orbit, then item position).
/// Violations are data, not errors: an empty result means feasible.
std::vector<Violation> validate(const Schedule& schedule, const Instance& instance);

/// The item a lone opportunity produces: the opportunity's window and angle
/// range, pointing at the range midpoint.
ScheduledItem singleton_item(const Opportunity& opp, const Instance& instance);

}  // namespace sosp
