#pragma once

#include "ascent/dynamics.hpp"

#include <iosfwd>
#include <string>

namespace ascent::io {

/**
 * Write a trajectory as CSV, one row per dense-output sample. Column order:
 *
 *   t_s, x_m, y_m, r_m, alt_km, v_ms, gamma_deg, theta_deg, aoa_deg, phi_deg,
 *   mass_kg, thrust_N, omega_rads, H_norm, Phi, dVg_ms, dVt_ms
 *
 * aoa_deg is theta - gamma. H_norm and Phi are the normalized Hamiltonian and
 * switching function evaluated with closed-form costates under the resolved
 * angular-rate sign. Comment lines ahead of the header record the profile and
 * constants so the file can be re-verified standalone.
 */
void emit_trajectory(const dynamics::Trajectory& traj, std::ostream& out);
void emit_trajectory(const dynamics::Trajectory& traj, const std::string& path);

/** Read back a CSV produced by emit_trajectory (for `verify file.csv`). */
dynamics::Trajectory read_trajectory(const std::string& path);

} // namespace ascent::io
