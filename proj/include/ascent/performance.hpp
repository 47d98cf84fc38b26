#pragma once

#include "ascent/constants.hpp"
#include "ascent/dynamics.hpp"
#include "ascent/orbital.hpp"

namespace ascent::performance {

/** Pre-flight analytic estimate of the burn performance. */
struct PerformanceEstimate {
    double dv_gravity = 0.0;       // ~ (1/4) v_c gamma0^2 [m/s]
    double perigee_speed = 0.0;    // target perigee speed [m/s]
    double dv_total_impulse = 0.0; // (v_p - v0) + dv_gravity [m/s]
    double final_mass = 0.0;       // Tsiolkovsky estimate [kg]
    double burn_time = 0.0;        // (m0 - m_f) v_e / T_ref [s], informational
};

/** Post-flight loss accounting read from the trajectory's quadratures. */
struct LossBreakdown {
    double dv_gravity = 0.0;        // integral of g sin(gamma) [m/s]
    double dv_aoa = 0.0;            // integral of (T/m)(1 - cos(theta-gamma)) [m/s]
    double dv_total_impulse = 0.0;  // v_f - v0 + dv_gravity + dv_aoa [m/s]
    double impulse_residual = 0.0;  // |dv_total_impulse - v_e ln(m0/m_f)| [m/s]
};

/**
 * Gravity-loss estimate at constant radius r0,
 *   dv_G ~ (1/4) sqrt(mu/r0) gamma0^2.
 * An estimate only; it is never fed back into the solver.
 */
double gravity_loss_estimate(double r0, double gamma0, const Constants& c);

/**
 * Tsiolkovsky final-mass estimate for a perigee injection,
 *   m_f ~ m0 exp(-(dv_g + v_p - v0) / v_e)
 * with v_p the perigee speed of the target orbit.
 */
double final_mass_estimate(double m0, double v0, const orbital::OrbitShape& target,
                           double dv_g, double v_e, const Constants& c);

/** Full pre-flight estimate for a scenario's initial state and target. */
PerformanceEstimate estimate(double r0, double v0, double gamma0, double m0,
                             const orbital::OrbitShape& target, double v_e,
                             double thrust_ref, const Constants& c);

/**
 * Loss breakdown of a propagated trajectory, including the total-impulse
 * identity residual |v_f - v0 + dv_G + dv_T - v_e ln(m0/m_f)|.
 */
LossBreakdown accumulate_losses(const dynamics::Trajectory& traj);

/**
 * Alternative gravity-loss figure from the angular-rate difference between
 * the trajectory endpoints, (2/3) r0 |omega_f - omega_0|. Order-of-magnitude
 * cross-check only; the chain of approximations behind it carries no error
 * bound.
 */
double gravity_loss_from_rates(double r0, double theta0, double rf, const Constants& c);

} // namespace ascent::performance
