#include <doctest.h>

#include "sosp/model.hpp"
#include "test_support.hpp"

using namespace sosp;
using namespace sosp::testing;

TEST_CASE("objective sums member weights") {
    // Four tasks on one orbit, far enough apart to be trivially feasible.
    const Scenario scenario = make_scenario({2, 10, 4, 3}, 1,
                                            {{0, 0, 0, 20, -10.0, 10.0},
                                             {1, 0, 30, 50, -8.0, 12.0},
                                             {2, 0, 60, 80, -6.0, 14.0},
                                             {3, 0, 2000, 2020, 0.0, 5.0}});
    const Instance instance(scenario);

    CHECK(objective(instance.empty_schedule(), instance) == 0);

    SUBCASE("two singletons") {
        const Scenario s2 =
            make_scenario({5, 7}, 1, {{0, 0, 0, 10, 0.0, 1.0}, {1, 0, 100, 110, 0.0, 1.0}});
        const Instance inst2(s2);
        const Schedule schedule = schedule_with(
            inst2, {singleton_item(inst2.opportunity(0), inst2),
                    singleton_item(inst2.opportunity(1), inst2)});
        CHECK(objective(schedule, inst2) == 12);
        CHECK(validate(schedule, inst2).empty());
    }

    SUBCASE("a cluster plus a singleton") {
        // Weights {2,10,4} merged into one opening, weight-3 task alone.
        Schedule schedule = schedule_with(
            instance, {build_item(instance, 0, {0, 1, 2}),
                       singleton_item(instance.opportunity(3), instance)});
        CHECK(objective(schedule, instance) == 19);
    }

    SUBCASE("unknown member id is an error") {
        Schedule schedule = schedule_with(instance, {build_item(instance, 0, {0})});
        schedule.items_by_orbit[0][0].member_task_ids[0] = 99;
        CHECK_THROWS_AS(objective(schedule, instance), ArgumentError);
    }
}

TEST_CASE("setup gap rule") {
    const Orbit orbit = reference_orbit();  // setup 10 s, unit slew velocity

    ScheduledItem prev;
    prev.window = {60, 100};
    prev.exec_angle = 10.0;
    ScheduledItem next;
    next.exec_angle = 20.0;

    // Required gap: 10 + (10 + 20) / 1 = 40.
    next.window = {141, 150};
    CHECK(setup_gap_ok(prev, next, orbit));
    next.window = {140, 150};
    CHECK(setup_gap_ok(prev, next, orbit));
    next.window = {139, 150};
    CHECK_FALSE(setup_gap_ok(prev, next, orbit));

    SUBCASE("zero-gap boundary") {
        Orbit free_orbit = orbit;
        free_orbit.setup_time = 0.0;
        prev.exec_angle = 0.0;
        next.exec_angle = 0.0;
        next.window = {100, 120};
        CHECK(setup_gap_ok(prev, next, free_orbit));
    }
}

TEST_CASE("orbit usage") {
    const Orbit orbit = reference_orbit();

    CHECK(orbit_usage({}, orbit).energy == 0.0);
    CHECK(orbit_usage({}, orbit).memory == 0.0);

    ScheduledItem a;
    a.window = {0, 10};
    a.exec_angle = 10.0;
    SUBCASE("single item: observation only") {
        const OrbitUsage usage = orbit_usage({a}, orbit);
        CHECK(usage.energy == doctest::Approx(10.0));
        CHECK(usage.memory == doctest::Approx(10.0));
    }
    SUBCASE("two items add the slew term") {
        ScheduledItem b;
        b.window = {100, 110};
        b.exec_angle = 20.0;
        const OrbitUsage usage = orbit_usage({a, b}, orbit);
        CHECK(usage.energy == doctest::Approx(50.0));  // 20 observation + 30 slew
        CHECK(usage.memory == doctest::Approx(20.0));
    }
    SUBCASE("permuting equal angles keeps energy unchanged") {
        ScheduledItem b = a;
        b.window = {100, 115};
        ScheduledItem c = a;
        c.window = {200, 230};
        const OrbitUsage fwd = orbit_usage({a, b, c}, orbit);
        const OrbitUsage rev = orbit_usage({c, b, a}, orbit);
        CHECK(fwd.energy == doctest::Approx(rev.energy));
    }
}

TEST_CASE("validate flags each constraint") {
    const Scenario scenario = make_scenario(
        {5, 7}, 2,
        {{0, 0, 0, 10, -5.0, 5.0}, {1, 0, 100, 110, -5.0, 5.0}, {1, 1, 40, 50, -5.0, 5.0}});
    const Instance instance(scenario);

    SUBCASE("feasible one-item schedule") {
        const Schedule schedule =
            schedule_with(instance, {singleton_item(instance.opportunity(0), instance)});
        CHECK(validate(schedule, instance).empty());
    }

    SUBCASE("duplicate membership across orbits") {
        const Schedule schedule = schedule_with(
            instance, {singleton_item(instance.opportunity(1), instance),
                       singleton_item(instance.opportunity(2), instance)});
        const auto violations = validate(schedule, instance);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].constraint == ConstraintId::EQ2);
        CHECK(violations[0].task_id == 1);
    }

    SUBCASE("eleven openings on a ten-opening orbit") {
        std::vector<int> weights(11, 3);
        std::vector<OppSpec> opps;
        for (int i = 0; i < 11; ++i)
            opps.push_back({i, 0, 1000 * i, 1000 * i + 10, 0.0, 0.0});
        const Instance inst(make_scenario(weights, 1, opps));
        std::vector<ScheduledItem> items;
        for (int i = 0; i < 11; ++i) items.push_back(singleton_item(inst.opportunity(i), inst));
        const auto violations = validate(schedule_with(inst, std::move(items)), inst);
        REQUIRE(!violations.empty());
        bool has_eq6 = false;
        for (const auto& v : violations) has_eq6 |= v.constraint == ConstraintId::EQ6;
        CHECK(has_eq6);
    }

    SUBCASE("setup-gap violation") {
        const Scenario tight = make_scenario(
            {5, 7}, 1, {{0, 0, 0, 10, -5.0, 5.0}, {1, 0, 12, 20, -5.0, 5.0}});
        const Instance inst(tight);
        const Schedule schedule = schedule_with(inst, {singleton_item(inst.opportunity(0), inst),
                                                       singleton_item(inst.opportunity(1), inst)});
        const auto violations = validate(schedule, inst);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].constraint == ConstraintId::EQ3);
        CHECK(violations[0].orbit_id == 0);
        CHECK(violations[0].item_index == 1);
    }

    SUBCASE("inconsistent cluster fields") {
        Schedule schedule =
            schedule_with(instance, {singleton_item(instance.opportunity(0), instance)});
        schedule.items_by_orbit[0][0].exec_angle = 3.0;  // not the midpoint
        const auto violations = validate(schedule, instance);
        REQUIRE(!violations.empty());
        CHECK(violations[0].constraint == ConstraintId::CLUSTER);
    }
}

TEST_CASE("objective is additive over disjoint orbits") {
    const Scenario scenario = make_scenario(
        {5, 7, 9}, 2,
        {{0, 0, 0, 10, -5.0, 5.0}, {1, 0, 100, 110, -5.0, 5.0}, {2, 1, 0, 10, -5.0, 5.0}});
    const Instance instance(scenario);
    Schedule left = schedule_with(instance, {singleton_item(instance.opportunity(0), instance),
                                             singleton_item(instance.opportunity(1), instance)});
    Schedule right = schedule_with(instance, {singleton_item(instance.opportunity(2), instance)});
    Schedule both = left;
    both.items_by_orbit[1] = right.items_by_orbit[1];
    CHECK(objective(both, instance) ==
          objective(left, instance) + objective(right, instance));
}

TEST_CASE("singleton items mirror their opportunity") {
    const Scenario scenario = make_scenario({4}, 1, {{0, 0, 17, 42, -12.0, 3.0}});
    const Instance instance(scenario);
    const ScheduledItem item = singleton_item(instance.opportunity(0), instance);
    CHECK(item.window == TimeWindow{17, 42});
    CHECK(item.angle_range == AngleRange{-12.0, 3.0});
    CHECK(item.exec_angle == doctest::Approx(-4.5));
    CHECK(item.weight == 4);
    CHECK(validate(schedule_with(instance, {item}), instance).empty());
}
