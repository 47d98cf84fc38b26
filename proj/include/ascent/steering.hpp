#pragma once

#include "ascent/constants.hpp"
#include "ascent/vec2.hpp"

namespace ascent::steering {

// ============================================================
// Closed-loop pitch law
// ============================================================

/** Upper bound on |theta|: asin(1/sqrt(3)), where the angular rate vanishes. */
double theta_max();

/**
 * Solve the implicit pitch equation for the thrust direction:
 *
 *   sin(gamma - theta) = (v_c / v) sin(theta) / sqrt(1 - 3 sin^2 theta),
 *   v_c = sqrt(mu / r)
 *
 * on the branch with sign(theta) = sign(gamma) and |theta| < theta_max().
 * On that branch the residual is strictly monotone in theta, so the root is
 * unique; it is bracketed and polished to |residual| < 1e-13.
 *
 * Requires r > 0, v > 0 and |gamma| < pi/2 (the law is singular for a purely
 * vertical flight path).
 */
double solve_pitch(double r, double v, double gamma, const Constants& c);

/** Residual of the pitch equation at a given theta (diagnostic hook). */
double pitch_residual(double r, double v, double gamma, double theta, const Constants& c);

// ============================================================
// Angular rate of the thrust direction
// ============================================================

/**
 * Magnitude of the inertial angular rate of the thrust direction,
 *
 *   omega = sqrt( mu/r^3 (1 - 3 sin^2 theta) )
 *
 * The sign convention is fixed so that omega = phi_dot - theta_dot on a
 * prograde ascent, which makes this value non-negative in all nominal cases.
 * Throws std::domain_error when sin^2 theta > 1/3.
 */
double angular_rate(double r, double theta, const Constants& c);

/** Time derivative of the angular rate, -(3 mu / r^3) sin(theta) cos(theta). */
double angular_rate_derivative(double r, double theta, const Constants& c);

// ============================================================
// Costate reconstruction
// ============================================================

/**
 * Adjoint variables reconstructed from the pitch angle, with the free
 * multiplier normalized so that ||p_v|| = 1 (whence p_m = v_e / m).
 */
struct CostateReconstruction {
    Vec2 p_r;      // position costate; ||p_r|| = |omega|
    Vec2 p_v;      // velocity costate, unit vector along the thrust direction
    double p_m = 0.0;  // mass costate, v_e / m
};

/**
 * Closed-form costates at a trajectory point:
 *
 *   p_r = omega (-cos(theta - phi), sin(theta - phi))
 *   p_v =       ( sin(theta - phi), cos(theta - phi))
 *   p_m = v_e / m
 *
 * `omega` is applied as given, sign included. Which sign makes the Hamiltonian
 * vanish is resolved empirically by the verification suite (it selects
 * -angular_rate on prograde trajectories); see pmp::resolve_omega_sign.
 */
CostateReconstruction reconstruct_costates(double theta, double phi, double omega,
                                           double mass, double v_e);

/**
 * Unit thrust direction at pitch theta above the local horizontal at
 * longitude phi, in the inertial frame. Identical to the p_v of
 * reconstruct_costates.
 */
Vec2 thrust_direction(double theta, double phi);

} // namespace ascent::steering
