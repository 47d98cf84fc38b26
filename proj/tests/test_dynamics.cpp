#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ascent/dynamics.hpp"
#include "ascent/orbital.hpp"
#include "ascent/steering.hpp"

#include <cmath>

using namespace ascent;
using namespace ascent::dynamics;

namespace {
const Constants C;
const Propulsion VE{2942.0};

PlanarState gto_ignition(double mass = 10000.0) {
    return orbital::to_cartesian({C.earth_radius + 150e3, 5000.0, deg2rad(30.0), 0.0}, mass, 0.0);
}

const ThrustProfile TABLE1_LINEAR = ThrustProfile::linear(26467.0, -10.976);

// Kepler time of flight from a state with gamma > 0 to its osculating apogee,
// via the eccentric anomaly. Independent of the propagator.
double kepler_time_to_apogee(const PlanarState& s) {
    auto shape = orbital::shape_from_state(s, C);
    double a = shape.semi_major, e = shape.eccentricity;
    double r = s.position.norm();
    double cosE = (1.0 - r / a) / e;
    double E = std::acos(std::clamp(cosE, -1.0, 1.0));  // gamma > 0: E in (0, pi)
    double M = E - e * std::sin(E);
    double n = std::sqrt(C.mu / (a * a * a));
    return (PI - M) / n;
}
} // namespace

TEST_CASE("thrust profile evaluation") {
    SUBCASE("linear profile at 1000 s") {
        CHECK(TABLE1_LINEAR.thrust_at(1000.0, 0.0) == doctest::Approx(15491.0).epsilon(1e-12));
    }
    SUBCASE("constant thrust") {
        auto p = ThrustProfile::linear(20000.0, 0.0);
        CHECK(p.thrust_at(0.0, 0.0) == 20000.0);
        CHECK(p.thrust_at(12345.6, 0.0) == 20000.0);
    }
    SUBCASE("bilevel switch is left-closed") {
        auto p = ThrustProfile::bilevel(26339.0, 13799.0, 500.0);
        CHECK(p.thrust_at(499.0, 0.0) == 26339.0);
        CHECK(p.thrust_at(500.0, 0.0) == 13799.0);
        CHECK(p.thrust_at(501.0, 0.0) == 13799.0);
    }
    SUBCASE("minimum over a window") {
        CHECK(TABLE1_LINEAR.min_thrust_on(0.0, 1000.0) == doctest::Approx(15491.0));
        auto b = ThrustProfile::bilevel(20000.0, 12000.0, 300.0);
        CHECK(b.min_thrust_on(0.0, 200.0) == 20000.0);
        CHECK(b.min_thrust_on(0.0, 400.0) == 12000.0);
    }
}

TEST_CASE("right-hand side limits") {
    SUBCASE("zero thrust reduces to Kepler motion") {
        auto s = gto_ignition();
        auto d = rhs(s, 0.0, VE, Steering::optimal(), C);
        double r = s.position.norm();
        Vec2 g = s.position * (-C.mu / (r * r * r));
        CHECK(d.position_rate.x == s.velocity.x);
        CHECK(d.position_rate.y == s.velocity.y);
        CHECK(d.velocity_rate.x == doctest::Approx(g.x).epsilon(1e-14));
        CHECK(d.velocity_rate.y == doctest::Approx(g.y).epsilon(1e-14));
        CHECK(d.mass_rate == 0.0);
    }
    SUBCASE("circular state thrusts horizontally") {
        double r = C.earth_radius + 400e3;
        auto s = orbital::to_cartesian({r, orbital::circular_speed(r, C), 0.0, 0.0}, 8000.0, 0.0);
        auto d = rhs(s, 10000.0, VE, Steering::optimal(), C);
        // theta = 0: thrust along the local horizontal (+y at phi = 0)
        double thrust_x = d.velocity_rate.x + C.mu / (r * r);
        CHECK(thrust_x == doctest::Approx(0.0).scale(10000.0 / 8000.0));
        CHECK(d.velocity_rate.y == doctest::Approx(10000.0 / 8000.0).epsilon(1e-12));
        CHECK(d.mass_rate == doctest::Approx(-10000.0 / 2942.0).epsilon(1e-14));
        CHECK(d.dv_aoa_rate == doctest::Approx(0.0));
    }
}

TEST_CASE("propagation reproduces the reference linear-profile flight") {
    auto traj = propagate(gto_ignition(), TABLE1_LINEAR, VE, InjectionMode::Perigee,
                          IntegratorConfig{}, C);
    REQUIRE(traj.event_reached());
    CHECK(traj.duration() == doctest::Approx(1308.5).epsilon(5e-4));
    CHECK(rad2deg(traj.angular_range()) == doctest::Approx(69.7).epsilon(2e-3));
    CHECK(traj.final().state.mass == doctest::Approx(1422.5).epsilon(2e-4));
    CHECK(traj.final().dv_gravity == doctest::Approx(555.0).epsilon(2e-3));
    CHECK(traj.final().dv_aoa == doctest::Approx(27.0).epsilon(2e-2));

    SUBCASE("perigee event semantics") {
        CHECK(traj.min_gamma < 0.0);
        CHECK(traj.injection == InjectionKind::PerigeeLike);
        CHECK(std::fabs(traj.final().polar.gamma) < 1e-10);
        // gamma was strictly negative just before injection
        CHECK(traj.points[traj.points.size() - 2].polar.gamma < 0.0);
    }

    SUBCASE("mass bookkeeping matches the analytic propellant integral") {
        double tf = traj.duration();
        double burned = (26467.0 * tf - 10.976 * tf * tf / 2.0) / 2942.0;
        CHECK(traj.final().state.mass == doctest::Approx(10000.0 - burned).epsilon(1e-9));
    }

    SUBCASE("injection lands on the achieved perigee") {
        auto shape = orbital::shape_from_state(traj.final().state, C);
        CHECK(std::fabs(traj.final().polar.r - shape.periapsis_radius) < 1.0);
    }

    SUBCASE("mass decreases monotonically") {
        for (size_t i = 1; i < traj.points.size(); ++i)
            CHECK(traj.points[i].state.mass < traj.points[i - 1].state.mass);
    }

    SUBCASE("speed ODE matches finite differences of |v|") {
        // dv/dt = (T/m) cos(theta - gamma) - g sin(gamma), checked at interior
        // samples with an uneven central difference.
        int checked = 0;
        for (size_t i = 5; i + 5 < traj.points.size(); i += 7) {
            const auto& a = traj.points[i - 1];
            const auto& b = traj.points[i];
            const auto& c = traj.points[i + 1];
            double h1 = b.time() - a.time(), h2 = c.time() - b.time();
            double fd = (h1 * h1 * c.polar.v - h2 * h2 * a.polar.v
                         + (h2 * h2 - h1 * h1) * b.polar.v) / (h1 * h2 * (h1 + h2));
            double g = C.mu / (b.polar.r * b.polar.r);
            double model = b.thrust / b.state.mass * std::cos(b.theta - b.polar.gamma)
                           - g * std::sin(b.polar.gamma);
            CHECK(fd == doctest::Approx(model).epsilon(2e-3));
            ++checked;
        }
        CHECK(checked > 10);
    }

    SUBCASE("energy rate equals thrust power per unit mass") {
        // gravity is conservative, so dw/dt = (T/m) u . v
        int checked = 0;
        for (size_t i = 5; i + 5 < traj.points.size(); i += 7) {
            const auto& a = traj.points[i - 1];
            const auto& b = traj.points[i];
            const auto& c = traj.points[i + 1];
            auto w = [&](const TrajectoryPoint& p) {
                return 0.5 * p.polar.v * p.polar.v - C.mu / p.polar.r;
            };
            double h1 = b.time() - a.time(), h2 = c.time() - b.time();
            double fd = (h1 * h1 * w(c) - h2 * h2 * w(a) + (h2 * h2 - h1 * h1) * w(b))
                        / (h1 * h2 * (h1 + h2));
            Vec2 u = steering::thrust_direction(b.theta, b.polar.phi);
            double model = b.thrust / b.state.mass * u.dot(b.state.velocity);
            CHECK(fd == doctest::Approx(model).epsilon(2e-3));
            ++checked;
        }
        CHECK(checked > 10);
    }
}

TEST_CASE("halving the tolerances leaves the reported digits unchanged") {
    IntegratorConfig tight;
    tight.rel_tol = 0.5e-12;
    tight.abs_tol = 0.5e-12;
    auto base = propagate(gto_ignition(), TABLE1_LINEAR, VE, InjectionMode::Perigee,
                          IntegratorConfig{}, C);
    auto refined = propagate(gto_ignition(), TABLE1_LINEAR, VE, InjectionMode::Perigee, tight, C);
    REQUIRE(base.event_reached());
    REQUIRE(refined.event_reached());
    CHECK(std::fabs(base.final().state.mass - refined.final().state.mass) < 1e-3);
    CHECK(std::fabs(base.duration() - refined.duration()) < 1e-3);
}

TEST_CASE("near-coast propagation matches the Kepler apogee oracle") {
    // Negligible thrust: the apogee-mode event time must match the two-body
    // time of flight to apogee, and the event radius the osculating apogee.
    auto s0 = gto_ignition(10000.0);
    auto shape = orbital::shape_from_state(s0, C);
    auto traj = propagate(s0, ThrustProfile::linear(1e-3, 0.0), VE, InjectionMode::Apogee,
                          IntegratorConfig{}, C);
    REQUIRE(traj.event_reached());
    CHECK(traj.injection == InjectionKind::ApogeeLike);
    CHECK(traj.duration() == doctest::Approx(kepler_time_to_apogee(s0)).epsilon(1e-6));
    CHECK(traj.final().polar.r == doctest::Approx(shape.apoapsis_radius).epsilon(1e-7));
}

TEST_CASE("first-crossing mode stops at the descending crossing of the reference flight") {
    auto perigee = propagate(gto_ignition(), TABLE1_LINEAR, VE, InjectionMode::Perigee,
                             IntegratorConfig{}, C);
    auto first = propagate(gto_ignition(), TABLE1_LINEAR, VE, InjectionMode::FirstCrossing,
                           IntegratorConfig{}, C);
    REQUIRE(first.event_reached());
    CHECK(first.injection == InjectionKind::ApogeeLike);
    CHECK(first.duration() < perigee.duration());
    CHECK(std::fabs(first.final().polar.gamma) < 1e-10);
}

TEST_CASE("degenerate start at gamma = 0 ignores the ignition event") {
    // Ignite exactly at the apogee of a 200 x 1000 km orbit: gamma dips
    // negative and returns to zero near perigee; the t = t0 sample must not
    // terminate the propagation.
    auto orbit = orbital::shape_from_apsides(1000e3, 200e3, C);
    double va = orbital::apsis_speed(orbit, orbital::Apsis::Apogee, C);
    auto s0 = orbital::to_cartesian({orbit.apoapsis_radius, va, 0.0, 0.0}, 5000.0, 0.0);
    auto traj = propagate(s0, ThrustProfile::linear(8000.0, 0.0), VE, InjectionMode::Perigee,
                          IntegratorConfig{}, C);
    REQUIRE(traj.event_reached());
    CHECK(traj.duration() > 100.0);
    CHECK(traj.min_gamma < 0.0);
    CHECK(traj.injection == InjectionKind::PerigeeLike);
}

TEST_CASE("failure conditions are classified") {
    SUBCASE("max time exceeded") {
        IntegratorConfig cfg;
        cfg.max_time = 100.0;
        auto traj = propagate(gto_ignition(), TABLE1_LINEAR, VE, InjectionMode::Perigee, cfg, C);
        CHECK(traj.stop == StopReason::MaxTimeExceeded);
        CHECK_FALSE(traj.event_reached());
    }
    SUBCASE("mass depletion") {
        auto traj = propagate(gto_ignition(100.0), ThrustProfile::linear(5000.0, 0.0), VE,
                              InjectionMode::Perigee, IntegratorConfig{}, C);
        CHECK(traj.stop == StopReason::MassDepleted);
    }
    SUBCASE("thrust runs out") {
        auto traj = propagate(gto_ignition(), ThrustProfile::linear(20000.0, -400.0), VE,
                              InjectionMode::Perigee, IntegratorConfig{}, C);
        CHECK(traj.stop == StopReason::ThrustNonPositive);
    }
    SUBCASE("invalid inputs throw") {
        CHECK_THROWS_AS(propagate(gto_ignition(-5.0), TABLE1_LINEAR, VE, InjectionMode::Perigee,
                                  IntegratorConfig{}, C),
                        std::invalid_argument);
        CHECK_THROWS_AS(propagate(gto_ignition(), TABLE1_LINEAR, Propulsion{0.0},
                                  InjectionMode::Perigee, IntegratorConfig{}, C),
                        std::invalid_argument);
    }
}

TEST_CASE("angular range unwraps across the longitude branch cut") {
    Trajectory traj;
    for (double phi_deg : {170.0, 179.0, -172.0, -150.0}) {
        TrajectoryPoint p;
        p.polar.phi = deg2rad(phi_deg);
        traj.points.push_back(p);
    }
    CHECK(rad2deg(traj.angular_range()) == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("a tangent approach to gamma = 0 terminates as a grazing event") {
    // A gentle ignition skims just above its rising perigee; with these
    // parameters the flight path angle bottoms out a fraction of a
    // milliradian above zero instead of crossing. The propagation must stop
    // at the stationary point rather than burn on past the missed injection.
    auto s0 = orbital::to_cartesian({C.earth_radius + 150e3, 7200.0, deg2rad(3.0), 0.0},
                                    10000.0, 0.0);
    auto traj = propagate(s0, ThrustProfile::linear(9250.0, 15.84), VE,
                          InjectionMode::Perigee, IntegratorConfig{}, C);
    REQUIRE(traj.event_reached());
    CHECK(traj.grazing);
    CHECK(std::fabs(traj.final().polar.gamma) < IntegratorConfig{}.graze_tol);
    // at the stationary point the flight path angle rate vanishes
    const auto& f = traj.final();
    double g = C.mu / (f.polar.r * f.polar.r);
    double gdot = (f.polar.v / f.polar.r - g / f.polar.v) * std::cos(f.polar.gamma)
                  + f.thrust / (f.state.mass * f.polar.v) * std::sin(f.theta - f.polar.gamma);
    CHECK(std::fabs(gdot) < 1e-12);

    // disabling the band restores the old behaviour: the dip is missed and
    // the burn continues past it
    IntegratorConfig strict;
    strict.graze_tol = 0.0;
    auto missed = propagate(s0, ThrustProfile::linear(9250.0, 15.84), VE,
                            InjectionMode::Perigee, strict, C);
    CHECK((!missed.event_reached() || missed.duration() > 1.5 * traj.duration()));
}

TEST_CASE("bilevel integration restarts exactly at the switch") {
    auto profile = ThrustProfile::bilevel(26339.0, 13799.0, 500.0);
    auto traj = propagate(gto_ignition(), profile, VE, InjectionMode::Perigee,
                          IntegratorConfig{}, C);
    REQUIRE(traj.event_reached());
    bool found_boundary = false;
    for (size_t i = 1; i < traj.points.size(); ++i) {
        const auto& p = traj.points[i];
        CHECK(p.time() > traj.points[i - 1].time());
        if (p.time() == 500.0) {
            found_boundary = true;
            CHECK(p.thrust == 13799.0);  // left-closed convention
        }
        // no sample inside a step that straddles the jump
        if (traj.points[i - 1].time() < 500.0) CHECK(p.time() <= 500.0);
    }
    CHECK(found_boundary);
}
