#include "ascent/pmp.hpp"

#include "ascent/orbital.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ascent::pmp {

namespace {

// ------------------------------------------------------------
// Polynomial derivatives at the trajectory end
// ------------------------------------------------------------

// Fit the interpolating polynomial through (t_i, y_i) in a scaled local
// variable and read the first/second derivative at t_eval from its monomial
// coefficients. Times are shifted to t_eval so the derivatives are c1, 2*c2.
void end_derivatives(const std::vector<double>& t, const std::vector<double>& y,
                     double t_eval, double& d1, double& d2) {
    int n = static_cast<int>(t.size());
    double span = std::fabs(t_eval - t.front());
    if (span <= 0.0) span = 1.0;

    std::vector<std::vector<double>> A(n, std::vector<double>(n + 1));
    for (int i = 0; i < n; ++i) {
        double s = (t[i] - t_eval) / span;
        double p = 1.0;
        for (int j = 0; j < n; ++j) { A[i][j] = p; p *= s; }
        A[i][n] = y[i];
    }
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        for (int r = 0; r < n; ++r) {
            if (r == col || A[col][col] == 0.0) continue;
            double f = A[r][col] / A[col][col];
            for (int j = col; j <= n; ++j) A[r][j] -= f * A[col][j];
        }
    }
    double c1 = n > 1 ? A[1][n] / A[1][1] : 0.0;
    double c2 = n > 2 ? A[2][n] / A[2][2] : 0.0;
    d1 = c1 / span;
    d2 = 2.0 * c2 / (span * span);
}

// Last `count` samples separated by at least min_dt, oldest first.
std::vector<const TrajectoryPoint*> tail_samples(const Trajectory& traj, int count,
                                                 double min_dt = 1e-3) {
    std::vector<const TrajectoryPoint*> out;
    double t_last = std::numeric_limits<double>::infinity();
    for (auto it = traj.points.rbegin(); it != traj.points.rend() && (int)out.size() < count; ++it) {
        if (t_last - it->time() >= min_dt || out.empty()) {
            out.push_back(&*it);
            t_last = it->time();
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

// ------------------------------------------------------------
// Cubic Hermite interpolation of the state between dense samples
// ------------------------------------------------------------

struct HermiteSpan {
    double t0, t1;
    Vec2 p0, p1, v0, v1;      // position and velocity (= position rate)
    double m0, m1, md0, md1;  // mass and mass rate

    Vec2 position(double t) const {
        double h = t1 - t0, s = (t - t0) / h;
        double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        double h10 = s * (1 - s) * (1 - s);
        double h01 = s * s * (3 - 2 * s);
        double h11 = s * s * (s - 1);
        return h00 * p0 + (h10 * h) * v0 + h01 * p1 + (h11 * h) * v1;
    }
    double mass(double t) const {
        double h = t1 - t0, s = (t - t0) / h;
        double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        double h10 = s * (1 - s) * (1 - s);
        double h01 = s * s * (3 - 2 * s);
        double h11 = s * s * (s - 1);
        return h00 * m0 + h10 * h * md0 + h01 * m1 + h11 * h * md1;
    }
};

HermiteSpan span_between(const TrajectoryPoint& a, const TrajectoryPoint& b, double v_e) {
    HermiteSpan s;
    s.t0 = a.time(); s.t1 = b.time();
    s.p0 = a.state.position; s.p1 = b.state.position;
    s.v0 = a.state.velocity; s.v1 = b.state.velocity;
    s.m0 = a.state.mass; s.m1 = b.state.mass;
    s.md0 = -a.thrust / v_e; s.md1 = -b.thrust / v_e;
    return s;
}

// Costate vector: p_r (2), p_v (2), p_m.
using P = std::array<double, 5>;

P costate_rate(const P& p, const Vec2& pos, double thrust_over_m2, double mu) {
    double r = pos.norm();
    double g3 = mu / (r * r * r);
    Vec2 rh = pos / r;
    Vec2 pv{p[2], p[3]};
    double dot = rh.dot(pv);
    // p_r' = (mu/r^3) (p_v - 3 (rhat.p_v) rhat); p_v' = -p_r; p_m' = (T/m^2)|p_v|
    P d;
    d[0] = g3 * (pv.x - 3.0 * dot * rh.x);
    d[1] = g3 * (pv.y - 3.0 * dot * rh.y);
    d[2] = -p[0];
    d[3] = -p[1];
    d[4] = thrust_over_m2 * pv.norm();
    return d;
}

P closed_form(const TrajectoryPoint& pt, double v_e, int sign) {
    auto k = steering::reconstruct_costates(pt.theta, pt.polar.phi, sign * pt.omega,
                                            pt.state.mass, v_e);
    return {k.p_r.x, k.p_r.y, k.p_v.x, k.p_v.y, k.p_m};
}

} // namespace

// ============================================================
// Hamiltonian
// ============================================================

HamiltonianSample hamiltonian_at(const TrajectoryPoint& point, const dynamics::Propulsion& prop,
                                 const Constants& c, int omega_sign) {
    auto k = steering::reconstruct_costates(point.theta, point.polar.phi,
                                            omega_sign * point.omega, point.state.mass,
                                            prop.exhaust_velocity);
    double r = point.polar.r;
    Vec2 g = point.state.position * (-c.mu / (r * r * r));
    HamiltonianSample h;
    h.H0 = k.p_r.dot(point.state.velocity) + k.p_v.dot(g);
    h.Phi = k.p_v.norm() / point.state.mass - k.p_m / prop.exhaust_velocity;
    h.H = h.H0 + point.thrust * h.Phi;
    return h;
}

double hamiltonian_scale(const TrajectoryPoint& point, const Constants& c) {
    return point.polar.r * point.polar.r / c.mu;
}

int resolve_omega_sign(const Trajectory& traj) {
    double worst[2] = {0.0, 0.0};  // index 0: sign -1, index 1: sign +1
    for (const auto& pt : traj.points) {
        double scale = hamiltonian_scale(pt, traj.constants);
        worst[0] = std::max(worst[0],
                            std::fabs(hamiltonian_at(pt, traj.propulsion, traj.constants, -1).H0) * scale);
        worst[1] = std::max(worst[1],
                            std::fabs(hamiltonian_at(pt, traj.propulsion, traj.constants, +1).H0) * scale);
    }
    return worst[0] <= worst[1] ? -1 : +1;
}

// ============================================================
// Costate propagation
// ============================================================

CostateCheck propagate_costates(const Trajectory& traj, int omega_sign) {
    if (traj.points.size() < 2)
        throw std::invalid_argument("pmp: trajectory too short for costate propagation");
    double v_e = traj.propulsion.exhaust_velocity;
    double mu = traj.constants.mu;
    double t_ignition = traj.initial().time();

    P p = closed_form(traj.initial(), v_e, omega_sign);
    double psi0 = traj.initial().state.mass * p[4];

    CostateCheck chk;
    auto compare = [&](const P& integrated, const TrajectoryPoint& pt) {
        P cf = closed_form(pt, v_e, omega_sign);
        double pr_ref = std::hypot(cf[0], cf[1]);
        double pr_dev = std::hypot(integrated[0] - cf[0], integrated[1] - cf[1])
                        / std::max(pr_ref, 1e-300);
        double pv_dev = std::hypot(integrated[2] - cf[2], integrated[3] - cf[3]);
        double pm_dev = std::fabs(integrated[4] - cf[4]) / cf[4];
        chk.max_pr_rel_dev = std::max(chk.max_pr_rel_dev, pr_dev);
        chk.max_pv_dev = std::max(chk.max_pv_dev, pv_dev);
        chk.max_pm_rel_dev = std::max(chk.max_pm_rel_dev, pm_dev);
        double pv_norm = std::hypot(integrated[2], integrated[3]);
        chk.max_pv_norm_dev = std::max(chk.max_pv_norm_dev, std::fabs(pv_norm - 1.0));
        double psi = pt.state.mass * integrated[4];
        chk.max_psi_rel_dev = std::max(chk.max_psi_rel_dev, std::fabs(psi / psi0 - 1.0));
        double phi_scaled = std::fabs(pv_norm - pt.state.mass * integrated[4] / v_e);
        chk.max_phi_scaled = std::max(chk.max_phi_scaled, phi_scaled);
    };
    compare(p, traj.initial());

    // Classic RK4 in sub-steps between samples; the costate system is linear
    // in (p_r, p_v) and slow relative to the sample spacing.
    for (size_t i = 0; i + 1 < traj.points.size(); ++i) {
        const auto& a = traj.points[i];
        const auto& b = traj.points[i + 1];
        HermiteSpan span = span_between(a, b, v_e);
        double h_total = b.time() - a.time();
        if (h_total <= 0.0) { compare(p, b); continue; }
        int nsub = 4;
        double h = h_total / nsub;
        double t = a.time();
        for (int s = 0; s < nsub; ++s) {
            auto f = [&](double tt, const P& q) {
                double m = span.mass(tt);
                double T = traj.profile.thrust_at(tt, t_ignition);
                return costate_rate(q, span.position(tt), T / (m * m), mu);
            };
            P k1 = f(t, p);
            P q2; for (int j = 0; j < 5; ++j) q2[j] = p[j] + 0.5 * h * k1[j];
            P k2 = f(t + 0.5 * h, q2);
            P q3; for (int j = 0; j < 5; ++j) q3[j] = p[j] + 0.5 * h * k2[j];
            P k3 = f(t + 0.5 * h, q3);
            P q4; for (int j = 0; j < 5; ++j) q4[j] = p[j] + h * k3[j];
            P k4 = f(t + h, q4);
            for (int j = 0; j < 5; ++j)
                p[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            t += h;
        }
        compare(p, b);
    }

    chk.max_rel_deviation = std::max({chk.max_pr_rel_dev, chk.max_pv_dev, chk.max_pm_rel_dev});
    return chk;
}

// ============================================================
// Terminal checks
// ============================================================

TerminalCheck terminal_checks(const Trajectory& traj) {
    TerminalCheck tc;
    tc.applicable = traj.event_reached();
    tc.kind = traj.injection;
    if (!tc.applicable) return tc;

    const auto& last = traj.final();
    tc.theta_f = last.theta;
    tc.sin_theta_f = std::sin(last.theta);
    tc.gamma_f = last.polar.gamma;
    tc.v_f = last.polar.v;
    tc.v_c_f = std::sqrt(traj.constants.mu / last.polar.r);
    tc.theta_dot_kinematic = (tc.v_f - tc.v_c_f) / last.polar.r;
    tc.theta_ddot_thrust = last.thrust / (last.state.mass * last.polar.r);

    auto stencil = tail_samples(traj, 5);
    if (stencil.size() >= 3) {
        std::vector<double> t, th;
        for (auto* p : stencil) { t.push_back(p->time()); th.push_back(p->theta); }
        end_derivatives(t, th, last.time(), tc.theta_dot_fd, tc.theta_ddot_fd);
    }

    // gamma strictly negative on the samples immediately before the event
    if (traj.points.size() >= 3) {
        const auto& prev = traj.points[traj.points.size() - 2];
        tc.downward_final_leg = prev.polar.gamma < 0.0;
    }
    return tc;
}

// ============================================================
// Report
// ============================================================

PmpReport verify(const Trajectory& traj) {
    PmpReport rep;
    rep.omega_sign = resolve_omega_sign(traj);
    for (const auto& pt : traj.points) {
        auto h = hamiltonian_at(pt, traj.propulsion, traj.constants, rep.omega_sign);
        double scale = hamiltonian_scale(pt, traj.constants);
        rep.max_h_norm = std::max(rep.max_h_norm, std::fabs(h.H) * scale);
        rep.max_h0_norm = std::max(rep.max_h0_norm, std::fabs(h.H0) * scale);
        rep.max_phi_closed = std::max(rep.max_phi_closed, std::fabs(h.Phi));
    }
    rep.costates = propagate_costates(traj, rep.omega_sign);
    rep.terminal = terminal_checks(traj);
    return rep;
}

} // namespace ascent::pmp
