// Command-line front end: estimate / solve / sweep / verify on a scenario file.
//
// Exit codes: 0 success, 1 validation or input error, 2 solver non-convergence.

#include "ascent/performance.hpp"
#include "ascent/pmp.hpp"
#include "ascent/scenario_io.hpp"
#include "ascent/solver.hpp"
#include "ascent/trajectory_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace ascent;
using nlohmann::json;

namespace {

constexpr int EXIT_VALIDATION = 1;
constexpr int EXIT_NO_CONVERGENCE = 2;

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

json profile_json(const dynamics::ThrustProfile& p) {
    json j;
    if (p.kind == dynamics::ThrustProfile::Kind::Linear) {
        j["kind"] = "linear";
        j["T1_N"] = p.T1;
        j["T2_N_per_s"] = p.T2;
    } else {
        j["kind"] = "bilevel";
        j["T1_N"] = p.T1;
        j["T2_N"] = p.T2;
        j["t1_s"] = p.t1;
    }
    return j;
}

json solve_json(const solver::SolveResult& r) {
    json j;
    j["converged"] = r.converged;
    j["message"] = r.message;
    j["iterations"] = r.iterations;
    j["profile"] = profile_json(r.profile);
    j["m_f_kg"] = r.final_mass;
    j["t_f_s"] = r.burn_time;
    j["angular_range_deg"] = rad2deg(r.angular_range);
    j["dv_gravity_ms"] = r.dv_gravity;
    j["dv_aoa_ms"] = r.dv_aoa;
    j["residual_m"] = {r.residual[0], r.residual[1]};
    j["residual_norm_m"] = r.residual_norm;
    j["achieved"] = {{"apogee_km", r.achieved_apogee_alt / 1e3},
                     {"perigee_km", r.achieved_perigee_alt / 1e3}};
    return j;
}

json pmp_json(const pmp::PmpReport& rep) {
    json j;
    j["omega_sign"] = rep.omega_sign;
    j["max_H_norm"] = rep.max_h_norm;
    j["max_H0_norm"] = rep.max_h0_norm;
    j["max_Phi_closed_form"] = rep.max_phi_closed;
    j["costate_propagation"] = {{"max_rel_deviation", rep.costates.max_rel_deviation},
                                {"max_pr_rel_dev", rep.costates.max_pr_rel_dev},
                                {"max_pv_dev", rep.costates.max_pv_dev},
                                {"max_pm_rel_dev", rep.costates.max_pm_rel_dev},
                                {"max_pv_norm_dev", rep.costates.max_pv_norm_dev},
                                {"max_psi_rel_dev", rep.costates.max_psi_rel_dev},
                                {"max_phi_scaled", rep.costates.max_phi_scaled}};
    j["terminal"] = {{"applicable", rep.terminal.applicable},
                     {"injection", rep.terminal.kind == dynamics::InjectionKind::PerigeeLike
                                       ? "perigee"
                                       : rep.terminal.kind == dynamics::InjectionKind::ApogeeLike
                                             ? "apogee" : "none"},
                     {"theta_f_rad", rep.terminal.theta_f},
                     {"sin_theta_f", rep.terminal.sin_theta_f},
                     {"gamma_f_rad", rep.terminal.gamma_f},
                     {"v_f_ms", rep.terminal.v_f},
                     {"v_c_f_ms", rep.terminal.v_c_f},
                     {"theta_dot_fd_rads", rep.terminal.theta_dot_fd},
                     {"theta_dot_kinematic_rads", rep.terminal.theta_dot_kinematic},
                     {"theta_ddot_fd_rads2", rep.terminal.theta_ddot_fd},
                     {"theta_ddot_thrust_rads2", rep.terminal.theta_ddot_thrust},
                     {"downward_final_leg", rep.terminal.downward_final_leg}};
    return j;
}

json estimate_json(const performance::PerformanceEstimate& e) {
    return {{"dv_gravity_ms", e.dv_gravity},
            {"perigee_speed_ms", e.perigee_speed},
            {"dv_total_impulse_ms", e.dv_total_impulse},
            {"m_f_kg", e.final_mass},
            {"burn_time_s", e.burn_time}};
}

performance::PerformanceEstimate make_estimate(const solver::Scenario& sc) {
    double t_ref = sc.solver.initial_twr * sc.initial_mass * sc.constants.g0;
    return performance::estimate(sc.initial.r, sc.initial.v, sc.initial.gamma,
                                 sc.initial_mass, sc.target,
                                 sc.propulsion.exhaust_velocity, t_ref, sc.constants);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
}

void apply_overrides(solver::Scenario& sc, const std::string& mode, double tol_residual,
                     double tol_rel, double tol_abs, double tol_event) {
    if (!mode.empty()) {
        if (mode == "perigee") sc.mode = dynamics::InjectionMode::Perigee;
        else if (mode == "apogee") sc.mode = dynamics::InjectionMode::Apogee;
        else if (mode == "first") sc.mode = dynamics::InjectionMode::FirstCrossing;
        else throw std::runtime_error("mode must be perigee|apogee|first");
    }
    if (tol_residual > 0) sc.solver.residual_tol = tol_residual;
    if (tol_rel > 0) sc.integrator.rel_tol = tol_rel;
    if (tol_abs > 0) sc.integrator.abs_tol = tol_abs;
    if (tol_event > 0) sc.integrator.event_tol = tol_event;
}

// --grid "t1=250,500,750" or "T1=...;T2=...[;t1=...]"
struct GridSpec {
    std::vector<double> t1, T1, T2;
};

GridSpec parse_grid(const std::string& spec) {
    GridSpec g;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) throw std::runtime_error("grid: expected key=v1,v2,...");
        std::string key = part.substr(0, eq);
        std::vector<double> vals;
        std::stringstream vs(part.substr(eq + 1));
        std::string v;
        while (std::getline(vs, v, ',')) vals.push_back(std::stod(v));
        if (vals.empty()) throw std::runtime_error("grid: empty value list for " + key);
        if (key == "t1") g.t1 = vals;
        else if (key == "T1") g.T1 = vals;
        else if (key == "T2") g.T2 = vals;
        else throw std::runtime_error("grid: unknown key '" + key + "'");
    }
    return g;
}

std::string csv_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum-fuel single-boost planar ascent: closed-loop steering, "
                 "thrust-profile shooting, and optimality diagnostics"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = ".", mode_override, grid_spec, verify_input;
    double tol_residual = 0, tol_rel = 0, tol_abs = 0, tol_event = 0;
    bool echo_config = false, serial = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
        cmd->add_option("--mode", mode_override, "Injection mode: perigee|apogee|first");
        cmd->add_option("--tol-residual-m", tol_residual, "Solver residual tolerance [m]");
        cmd->add_option("--tol-rel", tol_rel, "Integrator relative tolerance");
        cmd->add_option("--tol-abs", tol_abs, "Integrator absolute tolerance");
        cmd->add_option("--tol-event-rad", tol_event, "Event tolerance on gamma [rad]");
    };

    auto* c_est = app.add_subcommand("estimate", "Analytic gravity-loss and final-mass guess");
    c_est->add_option("scenario", scenario_path, "Scenario JSON file")->required();

    auto* c_solve = app.add_subcommand("solve", "Solve the thrust-profile shooting problem");
    c_solve->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    c_solve->add_flag("--echo-config", echo_config, "Print the fully-resolved scenario and exit");
    add_common(c_solve);

    auto* c_sweep = app.add_subcommand("sweep", "Sweep thrust parameters or switching dates");
    c_sweep->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    c_sweep->add_option("--grid", grid_spec, "e.g. t1=250,500,750 or T1=25e3,26e3;T2=-12,-10")
        ->required();
    c_sweep->add_flag("--serial", serial, "Disable parallel evaluation");
    add_common(c_sweep);

    auto* c_verify = app.add_subcommand("verify", "Optimality diagnostics on a solved trajectory");
    c_verify->add_option("input", verify_input, "Scenario JSON or trajectory CSV")->required();
    add_common(c_verify);

    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(out_dir);

        if (c_est->parsed()) {
            auto sc = io::load_scenario(scenario_path);
            auto e = make_estimate(sc);
            std::printf("dv_gravity_est_ms  %.1f\n", e.dv_gravity);
            std::printf("perigee_speed_ms   %.1f\n", e.perigee_speed);
            std::printf("dv_total_ms        %.1f\n", e.dv_total_impulse);
            std::printf("m_f_est_kg         %.1f\n", e.final_mass);
            std::printf("burn_time_est_s    %.1f\n", e.burn_time);
            return 0;
        }

        if (c_solve->parsed()) {
            auto sc = io::load_scenario(scenario_path);
            apply_overrides(sc, mode_override, tol_residual, tol_rel, tol_abs, tol_event);
            if (echo_config) {
                std::cout << io::echo_scenario(sc);
                return 0;
            }
            auto result = solver::solve(sc);
            if (!result.converged) {
                std::fprintf(stderr, "solve: %s (residual %.3g m after %d iterations)\n",
                             result.message.c_str(), result.residual_norm, result.iterations);
                return EXIT_NO_CONVERGENCE;
            }
            auto report = pmp::verify(result.trajectory);
            auto est = make_estimate(sc);

            json doc;
            doc["run"] = {{"timestamp", iso_timestamp()}};
            doc["config"] = json::parse(io::echo_scenario(sc));
            doc["solve"] = solve_json(result);
            doc["estimate"] = estimate_json(est);
            doc["estimate"]["rel_error_vs_solved"] =
                std::fabs(est.final_mass - result.final_mass) / result.final_mass;
            doc["pmp"] = pmp_json(report);

            auto out = std::filesystem::path(out_dir);
            write_text(out / "result.json", doc.dump(2) + "\n");
            io::emit_trajectory(result.trajectory, (out / "trajectory.csv").string());

            const auto& p = result.profile;
            std::printf("converged in %d iterations (residual %.2g m)\n", result.iterations,
                        result.residual_norm);
            if (p.kind == dynamics::ThrustProfile::Kind::Linear)
                std::printf("  T1        %10.3f kN\n  T2        %10.4f N/s\n", p.T1 / 1e3, p.T2);
            else
                std::printf("  T1        %10.3f kN\n  T2        %10.3f kN   (t1 = %g s)\n",
                            p.T1 / 1e3, p.T2 / 1e3, p.t1);
            std::printf("  m_f       %10.1f kg\n  t_f       %10.1f s\n  phi_f     %10.1f deg\n",
                        result.final_mass, result.burn_time, rad2deg(result.angular_range));
            std::printf("  dV_grav   %10.1f m/s\n  dV_aoa    %10.1f m/s\n", result.dv_gravity,
                        result.dv_aoa);
            std::printf("wrote %s and %s\n", (out / "result.json").c_str(),
                        (out / "trajectory.csv").c_str());
            return 0;
        }

        if (c_sweep->parsed()) {
            auto sc = io::load_scenario(scenario_path);
            apply_overrides(sc, mode_override, tol_residual, tol_rel, tol_abs, tol_event);
            auto grid = parse_grid(grid_spec);
            auto exec = serial ? solver::Execution::Serial : solver::Execution::Parallel;
            auto out = std::filesystem::path(out_dir) / "sweep.csv";
            std::ofstream os(out);
            if (!os) throw std::runtime_error("cannot open '" + out.string() + "'");

            if (!grid.t1.empty() && grid.T1.empty() && grid.T2.empty()) {
                auto results = solver::sweep_switch_times(sc, grid.t1, exec);
                os << "t1_s,converged,iterations,T1_N,T2_N,m_f_kg,t_f_s,phi_deg,"
                      "dVg_ms,dVt_ms,apogee_km,perigee_km\n";
                for (size_t i = 0; i < results.size(); ++i) {
                    const auto& r = results[i];
                    os << csv_num(grid.t1[i]) << ',' << (r.converged ? 1 : 0) << ','
                       << r.iterations << ',' << csv_num(r.profile.T1) << ','
                       << csv_num(r.profile.T2) << ',' << csv_num(r.final_mass) << ','
                       << csv_num(r.burn_time) << ',' << csv_num(rad2deg(r.angular_range)) << ','
                       << csv_num(r.dv_gravity) << ',' << csv_num(r.dv_aoa) << ','
                       << csv_num(r.achieved_apogee_alt / 1e3) << ','
                       << csv_num(r.achieved_perigee_alt / 1e3) << "\n";
                }
                std::printf("wrote %s (%zu switching dates)\n", out.c_str(), results.size());
                bool all = true;
                for (const auto& r : results) all = all && r.converged;
                return all ? 0 : EXIT_NO_CONVERGENCE;
            }

            if (grid.T1.empty() || grid.T2.empty())
                throw std::runtime_error("grid: give t1=... alone, or both T1=... and T2=...");
            std::vector<double> t1s = grid.t1.empty() ? std::vector<double>{sc.t1} : grid.t1;
            std::vector<std::array<double, 2>> points;
            for (double a : grid.T1)
                for (double b : grid.T2) points.push_back({a, b});

            os << "T1_N,T2,t1_s,feasible,stop,apogee_km,perigee_km,m_f_kg,t_f_s,phi_deg\n";
            for (double t1 : t1s) {
                solver::Scenario sc_t1 = sc;
                if (sc.profile_kind == dynamics::ThrustProfile::Kind::Bilevel) sc_t1.t1 = t1;
                auto recs = solver::sweep_profiles(sc_t1, points, exec);
                for (const auto& r : recs) {
                    os << csv_num(r.params[0]) << ',' << csv_num(r.params[1]) << ','
                       << csv_num(r.t1) << ',' << (r.feasible ? 1 : 0) << ','
                       << dynamics::to_string(r.stop) << ',' << csv_num(r.apogee_alt / 1e3) << ','
                       << csv_num(r.perigee_alt / 1e3) << ',' << csv_num(r.final_mass) << ','
                       << csv_num(r.burn_time) << ',' << csv_num(rad2deg(r.angular_range)) << "\n";
                }
            }
            std::printf("wrote %s\n", out.c_str());
            return 0;
        }

        if (c_verify->parsed()) {
            dynamics::Trajectory traj;
            if (verify_input.size() > 4 &&
                verify_input.substr(verify_input.size() - 4) == ".csv") {
                traj = io::read_trajectory(verify_input);
            } else {
                auto sc = io::load_scenario(verify_input);
                apply_overrides(sc, mode_override, tol_residual, tol_rel, tol_abs, tol_event);
                auto result = solver::solve(sc);
                if (!result.converged) {
                    std::fprintf(stderr, "verify: solve failed: %s\n", result.message.c_str());
                    return EXIT_NO_CONVERGENCE;
                }
                traj = result.trajectory;
            }
            auto report = pmp::verify(traj);
            json doc;
            doc["run"] = {{"timestamp", iso_timestamp()}};
            doc["pmp"] = pmp_json(report);
            auto out = std::filesystem::path(out_dir) / "pmp.json";
            write_text(out, doc.dump(2) + "\n");

            std::printf("omega sign resolved: %+d (Hamiltonian nullity)\n", report.omega_sign);
            std::printf("max |H|  r/vc^2      %.3e\n", report.max_h_norm);
            std::printf("max |H0| r/vc^2      %.3e\n", report.max_h0_norm);
            std::printf("max |Phi| (closed)   %.3e\n", report.max_phi_closed);
            std::printf("costate ODE max dev  %.3e\n", report.costates.max_rel_deviation);
            std::printf("|pv|-1 max           %.3e\n", report.costates.max_pv_norm_dev);
            std::printf("Psi drift max        %.3e\n", report.costates.max_psi_rel_dev);
            if (report.terminal.applicable) {
                std::printf("terminal: theta_f=%.3e rad gamma_f=%.3e rad\n", report.terminal.theta_f,
                            report.terminal.gamma_f);
                std::printf("          theta_dot fd=%.6e kin=%.6e rad/s\n",
                            report.terminal.theta_dot_fd, report.terminal.theta_dot_kinematic);
                std::printf("          v_f=%.1f m/s vs v_c=%.1f m/s, %s injection\n",
                            report.terminal.v_f, report.terminal.v_c_f,
                            report.terminal.kind == dynamics::InjectionKind::PerigeeLike
                                ? "downward perigee" : "upward apogee");
            }
            std::printf("wrote %s\n", out.c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return EXIT_VALIDATION;
    }
    return 0;
}
