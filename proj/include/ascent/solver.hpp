#pragma once

#include "ascent/constants.hpp"
#include "ascent/dynamics.hpp"
#include "ascent/orbital.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace ascent::solver {

using dynamics::InjectionMode;
using dynamics::IntegratorConfig;
using dynamics::Propulsion;
using dynamics::ThrustProfile;
using dynamics::Trajectory;
using orbital::OrbitShape;
using orbital::PolarKinematics;

// ============================================================
// Problem description
// ============================================================

/** Which terminal residual pair drives the iteration. */
enum class ResidualMode {
    ApsisRadii,       // (r_a - r_a*, r_p - r_p*) in meters (default)
    EnergyMomentum,   // scaled (w, h) mismatch; better conditioned near e = 0
};

struct SolverSettings {
    double residual_tol = 10.0;     // m, on each residual component
    int max_iter = 50;
    // Relative finite-difference step. The apogee radius carries visible
    // curvature in the thrust parameters, so 1e-4 keeps the forward-difference
    // entries stable to two significant digits under step halving; 1e-3 does
    // not.
    double fd_rel_step = 1e-4;
    double fd_floor_level = 1.0;    // N, absolute step floor for thrust levels
    double fd_floor_slope = 1e-3;   // N/s, floor for the linear slope
    int max_halvings = 10;          // damping of the Newton step
    double initial_twr = 0.25;      // thrust-to-weight of the constant-thrust seed
    ResidualMode residual_mode = ResidualMode::ApsisRadii;
};

/** Complete problem statement for one solve or sweep. */
struct Scenario {
    PolarKinematics initial;        // r, v, gamma at ignition (phi = 0 by convention)
    double initial_mass = 0.0;      // kg
    OrbitShape target;              // closed target orbit
    Propulsion propulsion;
    ThrustProfile::Kind profile_kind = ThrustProfile::Kind::Linear;
    double t1 = 0.0;                // switching date [s], bilevel only (fixed, never a Newton unknown)
    InjectionMode mode = InjectionMode::Perigee;
    IntegratorConfig integrator;
    SolverSettings solver;
    Constants constants;
    std::optional<std::array<double, 2>> guess;  // (T1, T2) override for the initial iterate

    dynamics::PlanarState initial_state() const;
    ThrustProfile make_profile(const std::array<double, 2>& params) const;
};

// ============================================================
// Results
// ============================================================

struct ShootResult {
    bool feasible = false;
    std::array<double, 2> residual{0.0, 0.0};  // m (or scaled m-equivalent)
    double residual_norm = 0.0;                // max-abs of the components
    Trajectory trajectory;
    dynamics::StopReason stop = dynamics::StopReason::MaxTimeExceeded;
};

struct SolveResult {
    bool converged = false;
    std::string message;
    ThrustProfile profile;            // converged (or best) parameters
    int iterations = 0;
    std::array<double, 2> residual{0.0, 0.0};
    double residual_norm = 0.0;       // m
    double final_mass = 0.0;          // kg
    double burn_time = 0.0;           // t_f - t0 [s]
    double angular_range = 0.0;       // rad
    double dv_gravity = 0.0;          // m/s
    double dv_aoa = 0.0;              // m/s
    double achieved_apogee_alt = 0.0; // m
    double achieved_perigee_alt = 0.0;// m
    Trajectory trajectory;            // the converged propagation
};

// ============================================================
// Operations
// ============================================================

/** Constant-thrust seed, T = initial_twr * m0 * g0 (slope zero / equal levels). */
std::array<double, 2> initial_guess(const Scenario& scenario);

/**
 * Propagate one parameter set and return the terminal-orbit residual.
 * Propagation failures (no event, depletion, non-positive thrust) are
 * reported as infeasible points rather than errors so the damped iteration
 * can back away from them.
 */
ShootResult shoot(const std::array<double, 2>& params, const Scenario& scenario);

/**
 * Damped Newton iteration on the two thrust parameters with a forward
 * finite-difference Jacobian. Converges when both residual components are
 * below solver.residual_tol. For bilevel profiles t1 stays fixed; sweep over
 * it externally.
 */
SolveResult solve(const Scenario& scenario);

// ============================================================
// Sweeps
// ============================================================

enum class Execution { Serial, Parallel };

/** One propagation record of a thrust-parameter sweep. */
struct SweepRecord {
    std::array<double, 2> params{0.0, 0.0};
    double t1 = 0.0;                   // copied from the scenario (bilevel)
    bool feasible = false;
    dynamics::StopReason stop = dynamics::StopReason::MaxTimeExceeded;
    double apogee_alt = 0.0;           // achieved, m
    double perigee_alt = 0.0;          // achieved, m
    double final_mass = 0.0;           // kg
    double burn_time = 0.0;            // s
    double angular_range = 0.0;        // rad
};

/**
 * Independent propagations over a list of (T1, T2) points. Results are
 * written by grid index, so the output is identical for serial and parallel
 * execution.
 */
std::vector<SweepRecord> sweep_profiles(const Scenario& scenario,
                                        const std::vector<std::array<double, 2>>& grid,
                                        Execution exec = Execution::Parallel);

/** One full solve per switching date; the outer loop parallelizes. */
std::vector<SolveResult> sweep_switch_times(const Scenario& scenario,
                                            const std::vector<double>& t1_grid,
                                            Execution exec = Execution::Parallel);

} // namespace ascent::solver
