#pragma once

#include "ascent/constants.hpp"
#include "ascent/dynamics.hpp"
#include "ascent/steering.hpp"

namespace ascent::pmp {

using dynamics::Trajectory;
using dynamics::TrajectoryPoint;

// ============================================================
// Pointwise Hamiltonian
// ============================================================

/** Hamiltonian split H = H0 + T * Phi evaluated with reconstructed costates. */
struct HamiltonianSample {
    double H = 0.0;
    double H0 = 0.0;   // p_r . v + p_v . g
    double Phi = 0.0;  // |p_v|/m - p_m/v_e, identically zero under the chosen normalization
};

/**
 * Evaluate H, H0 and Phi at a trajectory point using closed-form costates
 * with the angular rate taken as omega_sign * |omega|.
 */
HamiltonianSample hamiltonian_at(const TrajectoryPoint& point, const dynamics::Propulsion& prop,
                                 const Constants& c, int omega_sign);

/** Dimensionless Hamiltonian scale: multiply H by r^2 / mu (i.e. r / v_c^2). */
double hamiltonian_scale(const TrajectoryPoint& point, const Constants& c);

/**
 * The sign of the angular rate entering the costate reconstruction is not
 * printed unambiguously; the Hamiltonian is the arbiter. Evaluates the
 * normalized |H0| maximum under both assignments and returns the sign (+1 or
 * -1) that annihilates it.
 */
int resolve_omega_sign(const Trajectory& traj);

// ============================================================
// Costate propagation
// ============================================================

/**
 * Outcome of integrating the costate differential equations
 *
 *   p_r' = -(dg/dr)^T p_v,  p_v' = -p_r,  p_m' = (T/m^2) |p_v|
 *
 * along the trajectory (state interpolated between dense samples), starting
 * from the closed-form costates at ignition, compared against the closed
 * forms at every sample.
 */
struct CostateCheck {
    double max_rel_deviation = 0.0;   // worst of p_r, p_v, p_m relative deviations
    double max_pr_rel_dev = 0.0;
    double max_pv_dev = 0.0;          // ||p_v_int - p_v_closed|| (p_v is unit)
    double max_pm_rel_dev = 0.0;
    double max_pv_norm_dev = 0.0;     // | ||p_v_int|| - 1 |
    double max_psi_rel_dev = 0.0;     // | m p_m / (m0 p_m0) - 1 |
    double max_phi_scaled = 0.0;      // max | m Phi | from integrated costates
};

CostateCheck propagate_costates(const Trajectory& traj, int omega_sign);

// ============================================================
// Terminal conditions
// ============================================================

/**
 * Checks at the injection point: vanishing pitch and flight path angle, the
 * pitch-rate identity theta_dot = (v - v_c)/r, its sign (positive for a
 * downward perigee injection), and the circular-target second derivative
 * theta_ddot = T/(m r). Derivatives are one-sided 4th-order stencils over the
 * last dense samples.
 */
struct TerminalCheck {
    bool applicable = false;          // trajectory terminated by the gamma = 0 event
    dynamics::InjectionKind kind = dynamics::InjectionKind::None;
    double theta_f = 0.0;             // rad
    double sin_theta_f = 0.0;
    double gamma_f = 0.0;             // rad
    double v_f = 0.0;                 // m/s
    double v_c_f = 0.0;               // circular speed at r_f [m/s]
    double theta_dot_fd = 0.0;        // finite-difference pitch rate at t_f [rad/s]
    double theta_dot_kinematic = 0.0; // (v_f - v_c)/r_f [rad/s]
    double theta_ddot_fd = 0.0;       // finite-difference second derivative [rad/s^2]
    double theta_ddot_thrust = 0.0;   // T_f/(m_f r_f) [rad/s^2]
    bool downward_final_leg = false;  // gamma < 0 on an interval ending at t_f
};

TerminalCheck terminal_checks(const Trajectory& traj);

// ============================================================
// Full report
// ============================================================

/** Everything the verification suite measures on one trajectory. */
struct PmpReport {
    int omega_sign = -1;              // resolved assignment for the costate reconstruction
    double max_h_norm = 0.0;          // max |H| r/v_c^2, closed-form costates
    double max_h0_norm = 0.0;         // max |H0| r/v_c^2
    double max_phi_closed = 0.0;      // max |Phi| (closed form; algebraically zero)
    CostateCheck costates;
    TerminalCheck terminal;
};

PmpReport verify(const Trajectory& traj);

} // namespace ascent::pmp
