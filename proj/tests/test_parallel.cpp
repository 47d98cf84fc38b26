#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ascent/orbital.hpp"
#include "ascent/solver.hpp"

using namespace ascent;
using namespace ascent::solver;

namespace {
const Constants C;

Scenario gto_scenario() {
    Scenario sc;
    sc.initial = {C.earth_radius + 150e3, 5000.0, deg2rad(30.0), 0.0};
    sc.initial_mass = 10000.0;
    sc.target = orbital::shape_from_apsides(36000e3, 300e3, C);
    sc.propulsion = dynamics::Propulsion{2942.0};
    sc.constants = C;
    return sc;
}
} // namespace

// The parallel paths must be bit-identical to the serial reference: every
// evaluation is an independent pure function written to its own grid slot.

TEST_CASE("profile sweep: parallel equals serial exactly") {
    auto sc = gto_scenario();
    std::vector<std::array<double, 2>> grid;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 4; ++j)
            grid.push_back({24000.0 + 800.0 * i, -14.0 + 2.0 * j});

    auto serial = sweep_profiles(sc, grid, Execution::Serial);
    auto parallel = sweep_profiles(sc, grid, Execution::Parallel);
    REQUIRE(serial.size() == parallel.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].feasible == parallel[i].feasible);
        CHECK(serial[i].stop == parallel[i].stop);
        CHECK(serial[i].apogee_alt == parallel[i].apogee_alt);
        CHECK(serial[i].perigee_alt == parallel[i].perigee_alt);
        CHECK(serial[i].final_mass == parallel[i].final_mass);
        CHECK(serial[i].burn_time == parallel[i].burn_time);
        CHECK(serial[i].angular_range == parallel[i].angular_range);
    }
}

TEST_CASE("switch-time sweep: parallel equals serial exactly") {
    auto sc = gto_scenario();
    std::vector<double> t1s{250.0, 500.0, 750.0};
    auto serial = sweep_switch_times(sc, t1s, Execution::Serial);
    auto parallel = sweep_switch_times(sc, t1s, Execution::Parallel);
    REQUIRE(serial.size() == parallel.size());
    for (size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].converged == parallel[i].converged);
        CHECK(serial[i].iterations == parallel[i].iterations);
        CHECK(serial[i].profile.T1 == parallel[i].profile.T1);
        CHECK(serial[i].profile.T2 == parallel[i].profile.T2);
        CHECK(serial[i].final_mass == parallel[i].final_mass);
        CHECK(serial[i].burn_time == parallel[i].burn_time);
    }
}

TEST_CASE("solve is run-to-run deterministic") {
    auto a = solve(gto_scenario());
    auto b = solve(gto_scenario());
    CHECK(a.converged == b.converged);
    CHECK(a.iterations == b.iterations);
    CHECK(a.profile.T1 == b.profile.T1);
    CHECK(a.profile.T2 == b.profile.T2);
    CHECK(a.final_mass == b.final_mass);
    CHECK(a.burn_time == b.burn_time);
    CHECK(a.residual[0] == b.residual[0]);
    CHECK(a.residual[1] == b.residual[1]);
}
