#pragma once

#include "ascent/constants.hpp"
#include "ascent/vec2.hpp"

namespace ascent::orbital {

// ============================================================
// State representations
// ============================================================

/** Integrated point-mass state in the Earth-centered inertial frame. */
struct PlanarState {
    Vec2 position;  // m
    Vec2 velocity;  // m/s
    double mass = 0.0;  // kg
    double time = 0.0;  // s
};

/**
 * Polar kinematics of a planar state.
 *
 * gamma is the flight path angle, positive above the local horizontal.
 * phi is the longitude from the inertial x-axis, so that
 *   position = r (cos phi, sin phi)
 *   velocity = v (-sin(phi - gamma), cos(phi - gamma))
 * for prograde (counterclockwise) motion.
 */
struct PolarKinematics {
    double r = 0.0;      // radius [m]
    double v = 0.0;      // speed [m/s]
    double gamma = 0.0;  // flight path angle [rad]
    double phi = 0.0;    // longitude [rad]
};

// ============================================================
// Orbit shape
// ============================================================

/**
 * Shape of a planar two-body orbit: energy and angular momentum, plus the
 * derived semi-major axis, eccentricity and apsis radii.
 *
 * For open orbits (energy >= 0) the apsis radii are undefined (NaN) and
 * `closed` is false. A vanishing angular momentum flags a degenerate radial
 * orbit; eccentricity is 1 there and apsides are undefined.
 */
struct OrbitShape {
    double energy = 0.0;        // w = v^2/2 - mu/r [J/kg]
    double ang_momentum = 0.0;  // h = |r x v| [m^2/s]
    double semi_major = 0.0;    // a [m], negative for hyperbolic
    double eccentricity = 0.0;
    double apoapsis_radius = 0.0;   // r_a [m], NaN when not closed
    double periapsis_radius = 0.0;  // r_p [m], NaN when radial/open
    bool closed = false;            // energy < 0
    bool radial = false;            // h == 0 (degenerate)
};

enum class Apsis { Perigee, Apogee };

// ============================================================
// Operations
// ============================================================

/** Orbit shape from a Cartesian state. Requires r > 0 and v > 0. */
OrbitShape shape_from_state(const PlanarState& state, const Constants& c);

/** Orbit shape from polar kinematics (h = r v cos(gamma)). */
OrbitShape shape_from_state(const PolarKinematics& polar, const Constants& c);

/** Orbit shape from energy and angular momentum directly. */
OrbitShape shape_from_energy_momentum(double energy, double ang_momentum, const Constants& c);

/**
 * Orbit shape from apogee/perigee altitudes above the equatorial radius.
 * Negative altitudes (sub-surface apsides) are legal. Throws
 * std::invalid_argument when apogee < perigee or the perigee radius is not
 * positive.
 */
OrbitShape shape_from_apsides(double apogee_alt, double perigee_alt, const Constants& c);

/** Speed at an apsis of a closed orbit, v = h / r_apsis. */
double apsis_speed(const OrbitShape& shape, Apsis which, const Constants& c);

/** Circular orbit speed sqrt(mu / r). */
double circular_speed(double r, const Constants& c);

/** Polar kinematics of a Cartesian state. Throws when v = 0 (gamma undefined). */
PolarKinematics to_polar(const PlanarState& state);

/** Cartesian state from polar kinematics (prograde convention above). */
PlanarState to_cartesian(const PolarKinematics& polar, double mass, double time);

} // namespace ascent::orbital
