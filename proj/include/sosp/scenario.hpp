#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include "sosp/model.hpp"

namespace sosp {

/// Knobs for the synthetic scenario generator. Orbits are index slots
/// carrying identical resource parameters; visibility windows are sampled
/// directly, with targets in a smaller ground area producing temporally
/// denser windows on each orbit pass.
struct GeneratorConfig {
    int n_targets = 300;

    // Ground area the targets are spread over, degrees. The default covers
    // the wide reference box; shrink it to model densely clustered targets.
    double lat_min = -30.0, lat_max = 60.0;
    double lon_min = 0.0, lon_max = 150.0;

    int n_orbits = 56;  // four satellites, fourteen passes a day
    TimeSec horizon_seconds = 86400;

    double windows_per_visible_target = 2.8;  // mean opportunities per visible target
    double visibility_prob = 0.92;

    // Point-target pass durations barely vary for a fixed sensor.
    TimeSec window_len_min = 20, window_len_max = 26;
    double angle_halfwidth_min = 1.0, angle_halfwidth_max = 8.0;
    int weight_min = 2, weight_max = 10;

    TimeSec max_cluster_duration = 120;

    // Per-orbit resource parameters, identical across orbits.
    double memory_capacity = 1000.0;
    double memory_rate = 1.0;
    double energy_capacity = 1500.0;
    double obs_energy_rate = 1.0;
    double slew_energy_rate = 1.0;
    double slew_velocity = 1.0;
    double setup_time = 10.0;
    int max_openings = 10;

    std::uint64_t seed = 1;
};

/// Deterministic synthetic instance; a pure function of the config.
/// Throws ValidationError on an impossible config.
Scenario generate(const GeneratorConfig& config);

// Scenario documents are JSON with top-level keys `format` (must be 1),
// `meta`, `orbits`, `tasks`, `opportunities`. Times are integer seconds,
// angles decimal degrees. Unknown keys are rejected. Schedule documents
// reuse the same structure plus a `schedule` section.

void save_scenario(const Scenario& scenario, std::ostream& out);
void save_scenario_file(const Scenario& scenario, const std::string& path);
Scenario load_scenario(std::istream& in);
Scenario load_scenario_file(const std::string& path);

void save_schedule(const Scenario& scenario, const Schedule& schedule, std::ostream& out);
void save_schedule_file(const Scenario& scenario, const Schedule& schedule,
                        const std::string& path);
std::pair<Scenario, Schedule> load_schedule(std::istream& in);
std::pair<Scenario, Schedule> load_schedule_file(const std::string& path);

/// Generator config in the same JSON encoding; absent fields keep their
/// defaults, unknown keys are rejected.
GeneratorConfig load_generator_config(std::istream& in);
GeneratorConfig load_generator_config_file(const std::string& path);

}  // namespace sosp
