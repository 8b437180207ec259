#include "sosp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace sosp {

namespace {

using json = nlohmann::ordered_json;

double clamp(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

void check_config(const GeneratorConfig& c) {
    auto fail = [](const std::string& msg) { throw ValidationError("generator config: " + msg); };
    if (c.n_targets < 0) fail("n_targets must be >= 0");
    if (c.n_orbits < 1) fail("n_orbits must be >= 1");
    if (c.lat_min > c.lat_max) fail("lat bounds out of order");
    if (c.lon_min > c.lon_max) fail("lon bounds out of order");
    if (c.horizon_seconds <= 0) fail("horizon_seconds must be > 0");
    if (!(c.visibility_prob >= 0.0 && c.visibility_prob <= 1.0))
        fail("visibility_prob must be in [0, 1]");
    if (c.windows_per_visible_target <= 0) fail("windows_per_visible_target must be > 0");
    if (c.window_len_min < 1 || c.window_len_min > c.window_len_max)
        fail("window length bounds out of order");
    if (c.window_len_max > c.horizon_seconds) fail("window longer than the horizon");
    if (c.angle_halfwidth_min < 0 || c.angle_halfwidth_min > c.angle_halfwidth_max ||
        c.angle_halfwidth_max > 33.0)
        fail("angle halfwidth bounds must satisfy 0 <= min <= max <= 33");
    if (c.weight_min < 1 || c.weight_min > c.weight_max) fail("weight bounds out of order");
    if (c.max_cluster_duration <= 0) fail("max_cluster_duration must be > 0");
    if (!(c.slew_velocity > 0)) fail("slew_velocity must be > 0");
    if (c.max_openings < 1) fail("max_openings must be >= 1");
}

}  // namespace

Scenario generate(const GeneratorConfig& config) {
    check_config(config);
    Rng rng(config.seed);

    Scenario scenario;
    scenario.horizon_seconds = config.horizon_seconds;
    scenario.max_cluster_duration = config.max_cluster_duration;

    for (int j = 0; j < config.n_orbits; ++j) {
        Orbit orbit;
        orbit.id = j;
        orbit.memory_capacity = config.memory_capacity;
        orbit.memory_rate = config.memory_rate;
        orbit.energy_capacity = config.energy_capacity;
        orbit.obs_energy_rate = config.obs_energy_rate;
        orbit.slew_energy_rate = config.slew_energy_rate;
        orbit.slew_velocity = config.slew_velocity;
        orbit.setup_time = config.setup_time;
        orbit.max_openings = config.max_openings;
        scenario.orbits.push_back(orbit);
    }

    const double lat_span = config.lat_max - config.lat_min;
    const double lon_span = config.lon_max - config.lon_min;
    // Fractions relative to the wide reference box (90 deg lat, 150 deg
    // lon). Smaller boxes compress visibility into a shorter slice of each
    // pass and into a narrower band of slewing angles.
    const double area_fraction = clamp(lat_span * lon_span / (90.0 * 150.0), 0.0, 1.0);
    const double cross_fraction = clamp(lon_span / 150.0, 0.0, 1.0);

    const TimeSec orbit_period =
        std::min(config.horizon_seconds,
                 std::max<TimeSec>(1, 4 * config.horizon_seconds / config.n_orbits));
    // A pass overflies the wide reference box for roughly a third of the
    // orbit; smaller boxes shrink the visible slice with their footprint.
    const TimeSec min_span = std::min(config.horizon_seconds, 3 * config.window_len_max);
    const TimeSec vis_span = std::max(
        min_span, static_cast<TimeSec>(std::llround(static_cast<double>(orbit_period) * 0.35 *
                                                    std::sqrt(area_fraction))));
    const double band_width = clamp(cross_fraction * 66.0, 2.0 * config.angle_halfwidth_max, 66.0);

    struct Pass {
        TimeSec anchor;
        double band_center;
        double track_lon;               // ground-track longitude this pass covers
        std::vector<TimeWindow> taken;  // occupied slices, kept sorted
    };
    // Tracks are spread evenly around the globe; a pass only sees targets
    // within its coverage slice.
    const double track_spacing = 360.0 / config.n_orbits;
    const double coverage_halfwidth = std::max(11.0, 1.5 * track_spacing);
    std::vector<Pass> passes;
    for (int j = 0; j < config.n_orbits; ++j) {
        Pass p;
        p.anchor = rng.uniform_int(0, std::max<TimeSec>(0, config.horizon_seconds - vis_span));
        const double margin = std::max(0.0, 33.0 - band_width / 2.0);
        p.band_center = rng.uniform(-margin, margin);
        p.track_lon = track_spacing * j + rng.uniform(-0.2 * track_spacing, 0.2 * track_spacing);
        passes.push_back(std::move(p));
    }

    auto circular_distance = [](double a, double b) {
        double d = std::fmod(std::abs(a - b), 360.0);
        return std::min(d, 360.0 - d);
    };

    // Point targets file past the sensor one at a time, so windows on one
    // pass prefer disjoint slices; once a pass is booked solid the draw
    // falls back to its desired, possibly overlapping position.
    auto place_window = [](Pass& pass, TimeSec desired, TimeSec len, TimeSec span) -> TimeSec {
        auto fits_at = [&](TimeSec start) {
            for (const TimeWindow& w : pass.taken)
                if (start < w.end && w.start < start + len) return false;
            return true;
        };
        auto commit = [&](TimeSec start) {
            pass.taken.push_back({start, start + len});
            std::sort(pass.taken.begin(), pass.taken.end(),
                      [](const TimeWindow& a, const TimeWindow& b) { return a.start < b.start; });
            return start;
        };
        TimeSec start = desired;
        for (int hops = 0; start + len <= span && hops < 64; ++hops) {
            if (fits_at(start)) return commit(start);
            TimeSec next = start;
            for (const TimeWindow& w : pass.taken)
                if (start < w.end && w.start < start + len) next = std::max(next, w.end);
            start = next;
        }
        return commit(desired);
    };


    std::vector<int> orbit_pool;
    for (int t = 0; t < config.n_targets; ++t) {
        TaskSpec task;
        task.id = t;
        task.weight = static_cast<int>(rng.uniform_int(config.weight_min, config.weight_max));
        scenario.tasks.push_back(task);

        // Near-polar passes: latitude fixes where in the pass the target
        // shows up, longitude fixes the cross-track offset (slewing angle).
        const double lat = rng.uniform(config.lat_min, config.lat_max);
        const double lon = rng.uniform(config.lon_min, config.lon_max);
        const double along_track = lat_span > 0 ? (lat - config.lat_min) / lat_span : 0.5;
        const double cross_track = lon_span > 0 ? (lon - config.lon_min) / lon_span : 0.5;

        if (rng.uniform01() >= config.visibility_prob) continue;

        // Only passes whose ground track covers the target can see it.
        orbit_pool.clear();
        const double lon_mod = std::fmod(std::fmod(lon, 360.0) + 360.0, 360.0);
        for (int j = 0; j < config.n_orbits; ++j)
            if (circular_distance(passes[j].track_lon, lon_mod) <= coverage_halfwidth)
                orbit_pool.push_back(j);
        if (orbit_pool.empty()) continue;

        const int n_windows =
            std::min(static_cast<int>(orbit_pool.size()),
                     std::max(1, rng.poisson(config.windows_per_visible_target)));
        for (int k = 0; k < n_windows; ++k) {
            // Partial Fisher-Yates: pick a distinct eligible orbit per window.
            const int pick = static_cast<int>(
                rng.uniform_int(k, static_cast<long long>(orbit_pool.size()) - 1));
            std::swap(orbit_pool[k], orbit_pool[pick]);
            const int j = orbit_pool[k];
            const Pass& pass = passes[j];

            const TimeSec len = rng.uniform_int(config.window_len_min, config.window_len_max);
            const TimeSec reach = vis_span - len;
            const TimeSec jitter_bound = std::max<TimeSec>(1, vis_span / 20);
            const TimeSec jitter = rng.uniform_int(-jitter_bound, jitter_bound);
            TimeSec offset =
                static_cast<TimeSec>(std::llround(along_track * static_cast<double>(reach))) +
                jitter;
            offset = std::max<TimeSec>(0, std::min(reach, offset));
            const TimeSec placed = place_window(passes[j], offset, len, vis_span);

            Opportunity opp;
            opp.task_id = t;
            opp.orbit_id = j;
            opp.window.start = passes[j].anchor + placed;
            opp.window.end = opp.window.start + len;

            const double halfwidth =
                rng.uniform(config.angle_halfwidth_min, config.angle_halfwidth_max);
            const double wiggle = rng.uniform(-2.0, 2.0);
            const double center =
                clamp(pass.band_center + (cross_track - 0.5) * band_width + wiggle,
                      -33.0 + halfwidth, 33.0 - halfwidth);
            opp.angle_range = {center - halfwidth, center + halfwidth};
            scenario.opportunities.push_back(opp);
        }
    }
    return scenario;
}

// ---------------------------------------------------------------------------
// JSON encoding
// ---------------------------------------------------------------------------

namespace {

const json& expect_object(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ParseError(ctx + ": expected an object");
    return j;
}

const json& expect_array(const json& j, const std::string& ctx) {
    if (!j.is_array()) throw ParseError(ctx + ": expected an array");
    return j;
}

const json& require_key(const json& obj, const char* key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(ctx + ": missing field '" + key + "'");
    return *it;
}

long long get_int(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require_key(obj, key, ctx);
    if (!v.is_number_integer()) throw ParseError(ctx + "." + key + ": expected an integer");
    return v.get<long long>();
}

double get_double(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require_key(obj, key, ctx);
    if (!v.is_number()) throw ParseError(ctx + "." + key + ": expected a number");
    return v.get<double>();
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& ctx) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known) throw ParseError(ctx + ": unknown key '" + it.key() + "'");
    }
}

json scenario_to_json(const Scenario& scenario) {
    json doc;
    doc["format"] = 1;
    doc["meta"] = {{"horizon_seconds", scenario.horizon_seconds},
                   {"max_cluster_duration", scenario.max_cluster_duration}};
    json orbits = json::array();
    for (const Orbit& o : scenario.orbits)
        orbits.push_back({{"id", o.id},
                          {"memory_capacity", o.memory_capacity},
                          {"memory_rate", o.memory_rate},
                          {"energy_capacity", o.energy_capacity},
                          {"obs_energy_rate", o.obs_energy_rate},
                          {"slew_energy_rate", o.slew_energy_rate},
                          {"slew_velocity", o.slew_velocity},
                          {"setup_time", o.setup_time},
                          {"max_openings", o.max_openings}});
    doc["orbits"] = std::move(orbits);
    json tasks = json::array();
    for (const TaskSpec& t : scenario.tasks) tasks.push_back({{"id", t.id}, {"weight", t.weight}});
    doc["tasks"] = std::move(tasks);
    json opps = json::array();
    for (const Opportunity& opp : scenario.opportunities)
        opps.push_back({{"task", opp.task_id},
                        {"orbit", opp.orbit_id},
                        {"start", opp.window.start},
                        {"end", opp.window.end},
                        {"angle_lo", opp.angle_range.lo},
                        {"angle_hi", opp.angle_range.hi}});
    doc["opportunities"] = std::move(opps);
    return doc;
}

Scenario scenario_from_json(const json& doc) {
    expect_object(doc, "document");
    reject_unknown_keys(doc, {"format", "meta", "orbits", "tasks", "opportunities", "schedule"},
                        "document");
    if (get_int(doc, "format", "document") != 1)
        throw ParseError("document: unsupported format (expected 1)");

    Scenario scenario;
    const json& meta = expect_object(require_key(doc, "meta", "document"), "meta");
    reject_unknown_keys(meta, {"horizon_seconds", "max_cluster_duration"}, "meta");
    scenario.horizon_seconds = get_int(meta, "horizon_seconds", "meta");
    scenario.max_cluster_duration = get_int(meta, "max_cluster_duration", "meta");

    const json& orbits = expect_array(require_key(doc, "orbits", "document"), "orbits");
    for (std::size_t j = 0; j < orbits.size(); ++j) {
        const std::string ctx = "orbits[" + std::to_string(j) + "]";
        const json& entry = expect_object(orbits[j], ctx);
        reject_unknown_keys(entry,
                            {"id", "memory_capacity", "memory_rate", "energy_capacity",
                             "obs_energy_rate", "slew_energy_rate", "slew_velocity", "setup_time",
                             "max_openings"},
                            ctx);
        Orbit o;
        o.id = static_cast<int>(get_int(entry, "id", ctx));
        o.memory_capacity = get_double(entry, "memory_capacity", ctx);
        o.memory_rate = get_double(entry, "memory_rate", ctx);
        o.energy_capacity = get_double(entry, "energy_capacity", ctx);
        o.obs_energy_rate = get_double(entry, "obs_energy_rate", ctx);
        o.slew_energy_rate = get_double(entry, "slew_energy_rate", ctx);
        o.slew_velocity = get_double(entry, "slew_velocity", ctx);
        o.setup_time = get_double(entry, "setup_time", ctx);
        o.max_openings = static_cast<int>(get_int(entry, "max_openings", ctx));
        scenario.orbits.push_back(o);
    }

    const json& tasks = expect_array(require_key(doc, "tasks", "document"), "tasks");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const std::string ctx = "tasks[" + std::to_string(i) + "]";
        const json& entry = expect_object(tasks[i], ctx);
        reject_unknown_keys(entry, {"id", "weight"}, ctx);
        scenario.tasks.push_back({static_cast<int>(get_int(entry, "id", ctx)),
                                  static_cast<int>(get_int(entry, "weight", ctx))});
    }

    const json& opps = expect_array(require_key(doc, "opportunities", "document"), "opportunities");
    for (std::size_t k = 0; k < opps.size(); ++k) {
        const std::string ctx = "opportunities[" + std::to_string(k) + "]";
        const json& entry = expect_object(opps[k], ctx);
        reject_unknown_keys(entry, {"task", "orbit", "start", "end", "angle_lo", "angle_hi"}, ctx);
        Opportunity opp;
        opp.task_id = static_cast<int>(get_int(entry, "task", ctx));
        opp.orbit_id = static_cast<int>(get_int(entry, "orbit", ctx));
        opp.window.start = get_int(entry, "start", ctx);
        opp.window.end = get_int(entry, "end", ctx);
        opp.angle_range.lo = get_double(entry, "angle_lo", ctx);
        opp.angle_range.hi = get_double(entry, "angle_hi", ctx);
        scenario.opportunities.push_back(opp);
    }

    const auto problems = scenario_problems(scenario);
    if (!problems.empty()) throw ValidationError(problems.front());
    return scenario;
}

json schedule_to_json(const Schedule& schedule) {
    json items = json::array();
    for (const auto& orbit_items : schedule.items_by_orbit)
        for (const ScheduledItem& item : orbit_items)
            items.push_back({{"orbit", item.orbit_id},
                             {"members", item.member_task_ids},
                             {"start", item.window.start},
                             {"end", item.window.end},
                             {"angle_lo", item.angle_range.lo},
                             {"angle_hi", item.angle_range.hi},
                             {"exec_angle", item.exec_angle},
                             {"weight", item.weight}});
    return json{{"items", std::move(items)}};
}

Schedule schedule_from_json(const json& section, const Scenario& scenario) {
    expect_object(section, "schedule");
    reject_unknown_keys(section, {"items"}, "schedule");
    Schedule schedule;
    schedule.items_by_orbit.resize(scenario.orbits.size());
    const json& items = expect_array(require_key(section, "items", "schedule"), "schedule.items");
    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string ctx = "schedule.items[" + std::to_string(i) + "]";
        const json& entry = expect_object(items[i], ctx);
        reject_unknown_keys(
            entry, {"orbit", "members", "start", "end", "angle_lo", "angle_hi", "exec_angle",
                    "weight"},
            ctx);
        ScheduledItem item;
        item.orbit_id = static_cast<int>(get_int(entry, "orbit", ctx));
        if (item.orbit_id < 0 || item.orbit_id >= static_cast<int>(scenario.orbits.size()))
            throw ValidationError(ctx + ": unknown orbit id " + std::to_string(item.orbit_id));
        const json& members = expect_array(require_key(entry, "members", ctx), ctx + ".members");
        for (const json& m : members) {
            if (!m.is_number_integer())
                throw ParseError(ctx + ".members: expected integer task ids");
            item.member_task_ids.push_back(m.get<int>());
        }
        if (item.member_task_ids.empty())
            throw ValidationError(ctx + ": members must be non-empty");
        item.window.start = get_int(entry, "start", ctx);
        item.window.end = get_int(entry, "end", ctx);
        item.angle_range.lo = get_double(entry, "angle_lo", ctx);
        item.angle_range.hi = get_double(entry, "angle_hi", ctx);
        item.exec_angle = get_double(entry, "exec_angle", ctx);
        item.weight = static_cast<int>(get_int(entry, "weight", ctx));
        schedule.items_by_orbit[item.orbit_id].push_back(std::move(item));
    }
    for (auto& orbit_items : schedule.items_by_orbit)
        std::sort(orbit_items.begin(), orbit_items.end(),
                  [](const ScheduledItem& a, const ScheduledItem& b) {
                      return std::tie(a.window.start, a.window.end) <
                             std::tie(b.window.start, b.window.end);
                  });
    return schedule;
}

json parse_document(std::istream& in) {
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write file: " + path);
    return out;
}

}  // namespace

void save_scenario(const Scenario& scenario, std::ostream& out) {
    out << scenario_to_json(scenario).dump(2) << '\n';
}

void save_scenario_file(const Scenario& scenario, const std::string& path) {
    auto out = open_output(path);
    save_scenario(scenario, out);
}

Scenario load_scenario(std::istream& in) {
    const json doc = parse_document(in);
    if (doc.is_object() && doc.contains("schedule"))
        throw ParseError("document: this is a schedule file, not a scenario");
    return scenario_from_json(doc);
}

Scenario load_scenario_file(const std::string& path) {
    auto in = open_input(path);
    return load_scenario(in);
}

void save_schedule(const Scenario& scenario, const Schedule& schedule, std::ostream& out) {
    json doc = scenario_to_json(scenario);
    doc["schedule"] = schedule_to_json(schedule);
    out << doc.dump(2) << '\n';
}

void save_schedule_file(const Scenario& scenario, const Schedule& schedule,
                        const std::string& path) {
    auto out = open_output(path);
    save_schedule(scenario, schedule, out);
}

std::pair<Scenario, Schedule> load_schedule(std::istream& in) {
    const json doc = parse_document(in);
    Scenario scenario = scenario_from_json(doc);
    if (!doc.contains("schedule")) throw ParseError("document: missing 'schedule' section");
    Schedule schedule = schedule_from_json(doc.at("schedule"), scenario);
    return {std::move(scenario), std::move(schedule)};
}

std::pair<Scenario, Schedule> load_schedule_file(const std::string& path) {
    auto in = open_input(path);
    return load_schedule(in);
}

GeneratorConfig load_generator_config(std::istream& in) {
    const json doc = parse_document(in);
    expect_object(doc, "config");
    reject_unknown_keys(doc,
                        {"format", "n_targets", "area", "n_orbits", "horizon_seconds",
                         "windows_per_visible_target", "visibility_prob", "window_len_min",
                         "window_len_max", "angle_halfwidth_min", "angle_halfwidth_max",
                         "weight_min", "weight_max", "max_cluster_duration", "orbit", "seed"},
                        "config");
    if (doc.contains("format") && get_int(doc, "format", "config") != 1)
        throw ParseError("config: unsupported format (expected 1)");

    GeneratorConfig c;
    auto set_int = [&](const char* key, auto& field) {
        if (doc.contains(key)) field = static_cast<std::decay_t<decltype(field)>>(
                                   get_int(doc, key, "config"));
    };
    auto set_double = [&](const char* key, double& field) {
        if (doc.contains(key)) field = get_double(doc, key, "config");
    };
    set_int("n_targets", c.n_targets);
    set_int("n_orbits", c.n_orbits);
    set_int("horizon_seconds", c.horizon_seconds);
    set_double("windows_per_visible_target", c.windows_per_visible_target);
    set_double("visibility_prob", c.visibility_prob);
    set_int("window_len_min", c.window_len_min);
    set_int("window_len_max", c.window_len_max);
    set_double("angle_halfwidth_min", c.angle_halfwidth_min);
    set_double("angle_halfwidth_max", c.angle_halfwidth_max);
    set_int("weight_min", c.weight_min);
    set_int("weight_max", c.weight_max);
    set_int("max_cluster_duration", c.max_cluster_duration);
    set_int("seed", c.seed);

    if (doc.contains("area")) {
        const json& area = expect_object(doc.at("area"), "config.area");
        reject_unknown_keys(area, {"lat_min", "lat_max", "lon_min", "lon_max"}, "config.area");
        c.lat_min = get_double(area, "lat_min", "config.area");
        c.lat_max = get_double(area, "lat_max", "config.area");
        c.lon_min = get_double(area, "lon_min", "config.area");
        c.lon_max = get_double(area, "lon_max", "config.area");
    }
    if (doc.contains("orbit")) {
        const json& orbit = expect_object(doc.at("orbit"), "config.orbit");
        reject_unknown_keys(orbit,
                            {"memory_capacity", "memory_rate", "energy_capacity",
                             "obs_energy_rate", "slew_energy_rate", "slew_velocity", "setup_time",
                             "max_openings"},
                            "config.orbit");
        auto set_orbit_double = [&](const char* key, double& field) {
            if (orbit.contains(key)) field = get_double(orbit, key, "config.orbit");
        };
        set_orbit_double("memory_capacity", c.memory_capacity);
        set_orbit_double("memory_rate", c.memory_rate);
        set_orbit_double("energy_capacity", c.energy_capacity);
        set_orbit_double("obs_energy_rate", c.obs_energy_rate);
        set_orbit_double("slew_energy_rate", c.slew_energy_rate);
        set_orbit_double("slew_velocity", c.slew_velocity);
        set_orbit_double("setup_time", c.setup_time);
        if (orbit.contains("max_openings"))
            c.max_openings = static_cast<int>(get_int(orbit, "max_openings", "config.orbit"));
    }
    return c;
}

GeneratorConfig load_generator_config_file(const std::string& path) {
    auto in = open_input(path);
    return load_generator_config(in);
}

}  // namespace sosp
