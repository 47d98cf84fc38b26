#include "ascent/trajectory_io.hpp"

#include "ascent/pmp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ascent::io {

namespace {

const char* HEADER =
    "t_s,x_m,y_m,r_m,alt_km,v_ms,gamma_deg,theta_deg,aoa_deg,phi_deg,"
    "mass_kg,thrust_N,omega_rads,H_norm,Phi,dVg_ms,dVt_ms";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string steering_name(const dynamics::Steering& s) {
    switch (s.mode) {
        case dynamics::Steering::Mode::Optimal: return "optimal";
        case dynamics::Steering::Mode::OffsetFromOptimal: return "offset";
        case dynamics::Steering::Mode::AlongVelocity: return "along_velocity";
    }
    return "optimal";
}

} // namespace

void emit_trajectory(const dynamics::Trajectory& traj, std::ostream& out) {
    if (traj.points.empty()) throw std::invalid_argument("trajectory_io: empty trajectory");

    const auto& p = traj.profile;
    out << "# profile=" << (p.kind == dynamics::ThrustProfile::Kind::Linear ? "linear" : "bilevel")
        << " T1_N=" << fmt(p.T1) << " T2=" << fmt(p.T2);
    if (p.kind == dynamics::ThrustProfile::Kind::Bilevel) out << " t1_s=" << fmt(p.t1);
    out << "\n";
    out << "# ve_ms=" << fmt(traj.propulsion.exhaust_velocity) << "\n";
    out << "# mu_m3s2=" << fmt(traj.constants.mu)
        << " earth_radius_m=" << fmt(traj.constants.earth_radius) << "\n";
    out << "# steering=" << steering_name(traj.steering)
        << " stop=" << dynamics::to_string(traj.stop)
        << " min_gamma_rad=" << fmt(traj.min_gamma) << "\n";
    out << HEADER << "\n";

    int sign = pmp::resolve_omega_sign(traj);
    double phi_unwrapped = traj.points.front().polar.phi;
    double phi_last = phi_unwrapped;
    for (const auto& pt : traj.points) {
        double d = pt.polar.phi - phi_last;
        if (d > PI) d -= 2.0 * PI;
        if (d < -PI) d += 2.0 * PI;
        phi_unwrapped += d;
        phi_last = pt.polar.phi;
        auto h = pmp::hamiltonian_at(pt, traj.propulsion, traj.constants, sign);
        double scale = pmp::hamiltonian_scale(pt, traj.constants);
        out << fmt(pt.time()) << ',' << fmt(pt.state.position.x) << ','
            << fmt(pt.state.position.y) << ',' << fmt(pt.polar.r) << ','
            << fmt((pt.polar.r - traj.constants.earth_radius) / 1e3) << ','
            << fmt(pt.polar.v) << ',' << fmt(rad2deg(pt.polar.gamma)) << ','
            << fmt(rad2deg(pt.theta)) << ',' << fmt(rad2deg(pt.theta - pt.polar.gamma)) << ','
            << fmt(rad2deg(phi_unwrapped)) << ',' << fmt(pt.state.mass) << ','
            << fmt(pt.thrust) << ',' << fmt(pt.omega) << ',' << fmt(h.H * scale) << ','
            << fmt(h.Phi) << ',' << fmt(pt.dv_gravity) << ',' << fmt(pt.dv_aoa) << "\n";
    }
}

void emit_trajectory(const dynamics::Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("trajectory_io: cannot open '" + path + "' for writing");
    emit_trajectory(traj, out);
    if (!out) throw std::runtime_error("trajectory_io: failed writing '" + path + "'");
}

namespace {

// "key=value" tokens from a comment line
void parse_comment(const std::string& line, dynamics::Trajectory& traj) {
    std::istringstream ss(line.substr(1));
    std::string tok;
    while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        std::string key = tok.substr(0, eq);
        std::string val = tok.substr(eq + 1);
        if (key == "profile") {
            traj.profile.kind = (val == "bilevel") ? dynamics::ThrustProfile::Kind::Bilevel
                                                   : dynamics::ThrustProfile::Kind::Linear;
        } else if (key == "T1_N") traj.profile.T1 = std::stod(val);
        else if (key == "T2") traj.profile.T2 = std::stod(val);
        else if (key == "t1_s") traj.profile.t1 = std::stod(val);
        else if (key == "ve_ms") traj.propulsion.exhaust_velocity = std::stod(val);
        else if (key == "mu_m3s2") traj.constants.mu = std::stod(val);
        else if (key == "earth_radius_m") traj.constants.earth_radius = std::stod(val);
        else if (key == "min_gamma_rad") traj.min_gamma = std::stod(val);
        else if (key == "steering") {
            if (val == "along_velocity") traj.steering = dynamics::Steering::along_velocity();
            else traj.steering = dynamics::Steering::optimal();
        } else if (key == "stop") {
            if (val == "apsis_event") traj.stop = dynamics::StopReason::ApsisEvent;
            else if (val == "mass_depleted") traj.stop = dynamics::StopReason::MassDepleted;
            else if (val == "thrust_non_positive") traj.stop = dynamics::StopReason::ThrustNonPositive;
            else if (val == "steering_singular") traj.stop = dynamics::StopReason::SteeringSingular;
            else traj.stop = dynamics::StopReason::MaxTimeExceeded;
        }
    }
}

} // namespace

dynamics::Trajectory read_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("trajectory_io: cannot open '" + path + "'");

    dynamics::Trajectory traj;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') { parse_comment(line, traj); continue; }
        if (!header_seen) {
            if (line != HEADER)
                throw std::runtime_error("trajectory_io: unexpected CSV header in '" + path + "'");
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        double col[17];
        std::string cell;
        for (int i = 0; i < 17; ++i) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error("trajectory_io: short row in '" + path + "'");
            col[i] = std::stod(cell);
        }
        dynamics::TrajectoryPoint pt;
        double t = col[0], r = col[3], v = col[5];
        double gamma = deg2rad(col[6]), theta = deg2rad(col[7]), phi = deg2rad(col[9]);
        pt.state.position = {col[1], col[2]};
        pt.state.velocity = {-v * std::sin(phi - gamma), v * std::cos(phi - gamma)};
        pt.state.mass = col[10];
        pt.state.time = t;
        pt.polar = {r, v, gamma, phi};
        pt.theta = theta;
        pt.thrust = col[11];
        pt.omega = col[12];
        pt.dv_gravity = col[15];
        pt.dv_aoa = col[16];
        traj.points.push_back(pt);
    }
    if (traj.points.empty())
        throw std::runtime_error("trajectory_io: no data rows in '" + path + "'");
    if (traj.stop == dynamics::StopReason::ApsisEvent) {
        const auto& lastp = traj.points.back();
        traj.injection = lastp.polar.gamma >= traj.points[traj.points.size() - 2].polar.gamma
                             ? dynamics::InjectionKind::PerigeeLike
                             : dynamics::InjectionKind::ApogeeLike;
    }
    return traj;
}

} // namespace ascent::io
