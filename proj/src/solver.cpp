#include "ascent/solver.hpp"

#include "ascent/performance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ascent::solver {

namespace {

std::array<double, 2> residual_of(const Trajectory& traj, const Scenario& sc, bool& feasible) {
    auto shape = orbital::shape_from_state(traj.final().state, sc.constants);
    if (sc.solver.residual_mode == ResidualMode::ApsisRadii) {
        if (!shape.closed || shape.radial) {
            feasible = false;
            return {0.0, 0.0};
        }
        feasible = true;
        return {shape.apoapsis_radius - sc.target.apoapsis_radius,
                shape.periapsis_radius - sc.target.periapsis_radius};
    }
    // Energy/momentum residuals scaled to meter-like magnitudes so the same
    // tolerance applies: dw/|w*| and dh/h* are both O(dr/r).
    feasible = true;
    double r_ref = sc.target.periapsis_radius;
    return {(shape.energy - sc.target.energy) / std::fabs(sc.target.energy) * r_ref,
            (shape.ang_momentum - sc.target.ang_momentum) / sc.target.ang_momentum * r_ref};
}

double norm_inf(const std::array<double, 2>& r) {
    return std::max(std::fabs(r[0]), std::fabs(r[1]));
}

double norm_2(const std::array<double, 2>& r) {
    return std::hypot(r[0], r[1]);
}

SolveResult build_result(const Scenario& sc, const ShootResult& shot,
                         const std::array<double, 2>& params, int iterations,
                         bool converged, std::string message) {
    SolveResult res;
    res.converged = converged;
    res.message = std::move(message);
    res.profile = sc.make_profile(params);
    res.iterations = iterations;
    res.residual = shot.residual;
    res.residual_norm = shot.residual_norm;
    res.trajectory = shot.trajectory;
    if (!shot.trajectory.points.empty()) {
        const auto& traj = shot.trajectory;
        res.final_mass = traj.final().state.mass;
        res.burn_time = traj.duration();
        res.angular_range = traj.angular_range();
        auto losses = performance::accumulate_losses(traj);
        res.dv_gravity = losses.dv_gravity;
        res.dv_aoa = losses.dv_aoa;
        auto shape = orbital::shape_from_state(traj.final().state, sc.constants);
        if (shape.closed && !shape.radial) {
            res.achieved_apogee_alt = shape.apoapsis_radius - sc.constants.earth_radius;
            res.achieved_perigee_alt = shape.periapsis_radius - sc.constants.earth_radius;
        }
    }
    return res;
}

} // namespace

// ============================================================
// Scenario helpers
// ============================================================

dynamics::PlanarState Scenario::initial_state() const {
    return orbital::to_cartesian(initial, initial_mass, 0.0);
}

ThrustProfile Scenario::make_profile(const std::array<double, 2>& params) const {
    if (profile_kind == ThrustProfile::Kind::Linear)
        return ThrustProfile::linear(params[0], params[1]);
    return ThrustProfile::bilevel(params[0], params[1], t1);
}

// ============================================================
// Initial guess
// ============================================================

std::array<double, 2> initial_guess(const Scenario& scenario) {
    if (scenario.guess) return *scenario.guess;
    if (scenario.solver.initial_twr <= 0.0)
        throw std::invalid_argument("solver: initial thrust-to-weight must be positive");
    double T = scenario.solver.initial_twr * scenario.initial_mass * scenario.constants.g0;
    if (scenario.profile_kind == ThrustProfile::Kind::Linear) return {T, 0.0};
    return {T, T};
}

// ============================================================
// Shooting
// ============================================================

ShootResult shoot(const std::array<double, 2>& params, const Scenario& scenario) {
    ShootResult out;
    ThrustProfile profile = scenario.make_profile(params);
    if (profile.T1 <= 0.0 ||
        (profile.kind == ThrustProfile::Kind::Bilevel && profile.T2 <= 0.0)) {
        out.stop = dynamics::StopReason::ThrustNonPositive;
        return out;
    }
    out.trajectory = dynamics::propagate(scenario.initial_state(), profile,
                                         scenario.propulsion, scenario.mode,
                                         scenario.integrator, scenario.constants);
    out.stop = out.trajectory.stop;
    if (!out.trajectory.event_reached()) return out;

    bool feasible = false;
    out.residual = residual_of(out.trajectory, scenario, feasible);
    out.feasible = feasible;
    out.residual_norm = norm_inf(out.residual);
    return out;
}

// ============================================================
// Damped Newton on the thrust parameters
// ============================================================

SolveResult solve(const Scenario& scenario) {
    if (!scenario.target.closed)
        throw std::invalid_argument("solver: target orbit must be closed");
    if (scenario.initial_mass <= 0.0)
        throw std::invalid_argument("solver: initial mass must be positive");

    const auto& cfg = scenario.solver;
    std::array<double, 2> params = initial_guess(scenario);

    ShootResult base = shoot(params, scenario);
    if (!base.feasible)
        return build_result(scenario, base, params, 0, false,
                            "initial guess infeasible: " + dynamics::to_string(base.stop));

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        if (base.residual_norm < cfg.residual_tol)
            return build_result(scenario, base, params, iter, true, "converged");

        // Forward-difference Jacobian, one propagation per column. Columns are
        // independent; evaluate them in parallel.
        std::array<double, 2> steps;
        steps[0] = std::max(cfg.fd_rel_step * std::fabs(params[0]), cfg.fd_floor_level);
        double floor1 = scenario.profile_kind == ThrustProfile::Kind::Linear
                            ? cfg.fd_floor_slope : cfg.fd_floor_level;
        steps[1] = std::max(cfg.fd_rel_step * std::fabs(params[1]), floor1);

        double J[2][2];
        bool column_ok[2] = {false, false};
#ifdef _OPENMP
#pragma omp parallel for num_threads(2) schedule(static)
#endif
        for (int col = 0; col < 2; ++col) {
            auto p = params;
            p[col] += steps[col];
            ShootResult s = shoot(p, scenario);
            if (s.feasible) {
                column_ok[col] = true;
                J[0][col] = (s.residual[0] - base.residual[0]) / steps[col];
                J[1][col] = (s.residual[1] - base.residual[1]) / steps[col];
            }
        }
        if (!column_ok[0] || !column_ok[1])
            return build_result(scenario, base, params, iter, false,
                                "finite-difference column infeasible; adjust the initial guess");

        double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == 0.0 || !std::isfinite(det))
            return build_result(scenario, base, params, iter, false,
                                "singular Jacobian; try a different initial guess");
        std::array<double, 2> delta{
            -(J[1][1] * base.residual[0] - J[0][1] * base.residual[1]) / det,
            -(J[0][0] * base.residual[1] - J[1][0] * base.residual[0]) / det};

        // Damp: halve until the residual decreases; reject candidates whose
        // thrust goes non-positive over the previous iterate's burn window.
        double base_norm = norm_2(base.residual);
        double t_window = base.trajectory.duration();
        double alpha = 1.0;
        bool accepted = false;
        for (int k = 0; k <= cfg.max_halvings; ++k, alpha *= 0.5) {
            std::array<double, 2> cand{params[0] + alpha * delta[0], params[1] + alpha * delta[1]};
            ThrustProfile prof = scenario.make_profile(cand);
            if (prof.T1 <= 0.0 || prof.min_thrust_on(0.0, t_window) <= 0.0) continue;
            ShootResult trial = shoot(cand, scenario);
            if (!trial.feasible || norm_2(trial.residual) >= base_norm) continue;
            params = cand;
            base = trial;
            accepted = true;
            break;
        }
        if (!accepted)
            return build_result(scenario, base, params, iter, false,
                                "step damping failed to reduce the residual");
    }
    return build_result(scenario, base, params, scenario.solver.max_iter, false,
                        "max iterations exceeded");
}

// ============================================================
// Sweeps
// ============================================================

std::vector<SweepRecord> sweep_profiles(const Scenario& scenario,
                                        const std::vector<std::array<double, 2>>& grid,
                                        Execution exec) {
    std::vector<SweepRecord> records(grid.size());
    auto eval = [&](int i) {
        SweepRecord rec;
        rec.params = grid[i];
        rec.t1 = scenario.t1;
        ShootResult s = shoot(grid[i], scenario);
        rec.feasible = s.feasible;
        rec.stop = s.stop;
        if (s.feasible) {
            const auto& traj = s.trajectory;
            auto shape = orbital::shape_from_state(traj.final().state, scenario.constants);
            rec.apogee_alt = shape.apoapsis_radius - scenario.constants.earth_radius;
            rec.perigee_alt = shape.periapsis_radius - scenario.constants.earth_radius;
            rec.final_mass = traj.final().state.mass;
            rec.burn_time = traj.duration();
            rec.angular_range = traj.angular_range();
        }
        records[i] = rec;
    };
    int n = static_cast<int>(grid.size());
    if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < n; ++i) eval(i);
    } else {
        for (int i = 0; i < n; ++i) eval(i);
    }
    return records;
}

std::vector<SolveResult> sweep_switch_times(const Scenario& scenario,
                                            const std::vector<double>& t1_grid,
                                            Execution exec) {
    std::vector<SolveResult> results(t1_grid.size());
    auto eval = [&](int i) {
        Scenario sc = scenario;
        sc.profile_kind = ThrustProfile::Kind::Bilevel;
        sc.t1 = t1_grid[i];
        results[i] = solve(sc);
    };
    int n = static_cast<int>(t1_grid.size());
    if (exec == Execution::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < n; ++i) eval(i);
    } else {
        for (int i = 0; i < n; ++i) eval(i);
    }
    return results;
}

} // namespace ascent::solver
