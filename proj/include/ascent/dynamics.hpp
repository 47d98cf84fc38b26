#pragma once

#include "ascent/constants.hpp"
#include "ascent/orbital.hpp"
#include "ascent/vec2.hpp"

#include <string>
#include <vector>

namespace ascent::dynamics {

using orbital::PlanarState;
using orbital::PolarKinematics;

// ============================================================
// Thrust profile and propulsion
// ============================================================

/**
 * Parametric thrust profile, either
 *   Linear:  T(t) = T1 + (t - t0) T2
 *   Bilevel: T(t) = T1 for t < t1, T2 for t >= t1   (left-closed at t1)
 *
 * The thrust must remain strictly positive over the burn; the propagator
 * rejects profiles that reach a non-positive level before injection.
 */
struct ThrustProfile {
    enum class Kind { Linear, Bilevel };

    Kind kind = Kind::Linear;
    double T1 = 0.0;      // N
    double T2 = 0.0;      // N/s for Linear, N for Bilevel
    double t1 = 0.0;      // switching date [s], Bilevel only

    static ThrustProfile linear(double T1, double T2_slope) {
        return {Kind::Linear, T1, T2_slope, 0.0};
    }
    static ThrustProfile bilevel(double T1, double T2, double t1) {
        return {Kind::Bilevel, T1, T2, t1};
    }

    /** Thrust level at date t for a burn ignited at t0. */
    double thrust_at(double t, double t0) const;

    /** Smallest thrust level over [t0, t_end]. */
    double min_thrust_on(double t0, double t_end) const;
};

/** Engine model: everything the dynamics needs is the exhaust velocity. */
struct Propulsion {
    double exhaust_velocity = 0.0;  // v_e [m/s]

    static Propulsion from_exhaust_velocity(double ve) { return {ve}; }
    static Propulsion from_isp(double isp_s, const Constants& c) { return {isp_s * c.g0}; }
};

// ============================================================
// Steering selection
// ============================================================

/**
 * Pitch command applied during propagation. The optimal closed loop is the
 * default; the biased and velocity-aligned variants exist for verification
 * (non-vacuity of the optimality checks) and synthetic loss tests.
 */
struct Steering {
    enum class Mode { Optimal, OffsetFromOptimal, AlongVelocity };

    Mode mode = Mode::Optimal;
    double pitch_offset = 0.0;  // rad, OffsetFromOptimal only

    static Steering optimal() { return {Mode::Optimal, 0.0}; }
    static Steering offset(double delta_rad) { return {Mode::OffsetFromOptimal, delta_rad}; }
    static Steering along_velocity() { return {Mode::AlongVelocity, 0.0}; }

    /** Commanded pitch for the current kinematic conditions. */
    double pitch(double r, double v, double gamma, const Constants& c) const;
};

// ============================================================
// Propagation setup
// ============================================================

/** Terminal event selection on the flight path angle. */
enum class InjectionMode {
    Perigee,        // first upward gamma zero-crossing after a strictly negative excursion
    Apogee,         // gamma decreasing through zero from above
    FirstCrossing,  // first crossing of either direction
};

/** How a gamma = 0 event was reached (sign of gamma_dot at the event). */
enum class InjectionKind { None, PerigeeLike, ApogeeLike };

struct IntegratorConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;      // scaled by characteristic state magnitudes
    double max_step = 60.0;      // s
    double event_tol = 1e-10;    // rad on gamma at the terminal event
    double max_time = 20000.0;   // s of burn before giving up
    double initial_step = 1.0;   // s
    // Injection into a (near-)circular orbit makes the gamma = 0 crossing
    // tangent: gamma peaks and turns back without a sign change. A stationary
    // point of gamma inside this band of zero also terminates the
    // propagation, keeping the shooting residual continuous through circular
    // targets. Set to 0 to require a strict crossing.
    double graze_tol = 2e-3;     // rad
};

enum class StopReason {
    ApsisEvent,        // terminal gamma = 0 event located
    MaxTimeExceeded,   // no event within max_time
    MassDepleted,      // propellant exhausted
    ThrustNonPositive, // profile reached T <= 0 before the event
    SteeringSingular,  // |gamma| reached pi/2
};

std::string to_string(StopReason r);

// ============================================================
// Trajectory
// ============================================================

/** One dense-output sample with the quantities derived along the flight. */
struct TrajectoryPoint {
    PlanarState state;
    PolarKinematics polar;
    double theta = 0.0;       // commanded pitch [rad]
    double omega = 0.0;       // angular rate magnitude [rad/s]
    double thrust = 0.0;      // N
    double dv_gravity = 0.0;  // accumulated integral of g sin(gamma) [m/s]
    double dv_aoa = 0.0;      // accumulated integral of (T/m)(1 - cos(theta-gamma)) [m/s]

    double time() const { return state.time; }
};

/**
 * Time-ordered propagation output together with the inputs that produced it,
 * so downstream consumers (CSV export, the verification suite) are
 * self-contained.
 */
struct Trajectory {
    std::vector<TrajectoryPoint> points;
    ThrustProfile profile;
    Propulsion propulsion;
    Steering steering;
    InjectionMode mode = InjectionMode::Perigee;
    Constants constants;
    StopReason stop = StopReason::MaxTimeExceeded;
    InjectionKind injection = InjectionKind::None;
    bool grazing = false;    // event was a tangent approach, not a crossing
    double min_gamma = 0.0;  // over the whole flight [rad]

    bool event_reached() const { return stop == StopReason::ApsisEvent; }
    const TrajectoryPoint& initial() const { return points.front(); }
    const TrajectoryPoint& final() const { return points.back(); }
    double duration() const { return final().time() - initial().time(); }
    /**
     * Longitude swept between ignition and the final point [rad], unwrapped
     * across the atan2 branch cut so ranges beyond half a revolution report
     * correctly.
     */
    double angular_range() const;
};

// ============================================================
// Equations of motion
// ============================================================

/** Time derivative of the integrated state (plus the two loss quadratures). */
struct StateDerivative {
    Vec2 position_rate;
    Vec2 velocity_rate;
    double mass_rate = 0.0;
    double dv_gravity_rate = 0.0;
    double dv_aoa_rate = 0.0;
};

/**
 * Closed-loop right-hand side of the motion equations at a given state:
 * gravity plus thrust along the commanded pitch, mass depletion at T / v_e.
 */
StateDerivative rhs(const PlanarState& state, double thrust, const Propulsion& prop,
                    const Steering& steering, const Constants& c);

/**
 * Propagate the closed-loop dynamics from `initial` until the injection event
 * selected by `mode` (or until a failure condition).
 *
 * Embedded adaptive Runge-Kutta of order 5(4); for bilevel profiles the
 * integration is restarted exactly at t1 so no step straddles the thrust jump.
 * The terminal point is refined until |gamma| <= cfg.event_tol. Loss integrals
 * are carried as extra quadrature states, so they share the state's accuracy.
 */
Trajectory propagate(const PlanarState& initial, const ThrustProfile& profile,
                     const Propulsion& prop, InjectionMode mode,
                     const IntegratorConfig& cfg, const Constants& c,
                     const Steering& steering = Steering::optimal());

} // namespace ascent::dynamics
