#include "ascent/dynamics.hpp"

#include "ascent/steering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace ascent::dynamics {

namespace {

constexpr double NAN_D = std::numeric_limits<double>::quiet_NaN();

// Integrated vector: x, y, vx, vy, m, dv_gravity, dv_aoa.
using Y = std::array<double, 7>;

struct Kinematics {
    double r, v, gamma, phi;
};

Kinematics kinematics_of(const Y& y) {
    Kinematics k;
    k.r = std::hypot(y[0], y[1]);
    k.v = std::hypot(y[2], y[3]);
    k.phi = std::atan2(y[1], y[0]);
    double s = (y[0] * y[2] + y[1] * y[3]) / (k.r * k.v);
    k.gamma = std::asin(std::clamp(s, -1.0, 1.0));
    return k;
}

// Flight-path-angle rate, for locating tangent (grazing) injections.
double gamma_rate(const Y& y, double thrust, const Steering& steering, const Constants& c) {
    Kinematics k = kinematics_of(y);
    double theta = steering.pitch(k.r, k.v, k.gamma, c);
    double g = c.mu / (k.r * k.r);
    return (k.v / k.r - g / k.v) * std::cos(k.gamma)
           + thrust / (y[4] * k.v) * std::sin(theta - k.gamma);
}

Y derivative(const Y& y, double thrust, const Propulsion& prop, const Steering& steering,
             const Constants& c) {
    Kinematics k = kinematics_of(y);
    double theta = steering.pitch(k.r, k.v, k.gamma, c);
    Vec2 u = steering::thrust_direction(theta, k.phi);
    double g3 = c.mu / (k.r * k.r * k.r);
    double acc = thrust / y[4];
    Y d;
    d[0] = y[2];
    d[1] = y[3];
    d[2] = -g3 * y[0] + acc * u.x;
    d[3] = -g3 * y[1] + acc * u.y;
    d[4] = -thrust / prop.exhaust_velocity;
    d[5] = (c.mu / (k.r * k.r)) * std::sin(k.gamma);
    d[6] = acc * (1.0 - std::cos(theta - k.gamma));
    return d;
}

// ------------------------------------------------------------
// Dormand-Prince 5(4) embedded step
// ------------------------------------------------------------

struct DpResult {
    Y y;             // 5th-order solution at t + h
    double err = 0;  // scaled RMS error estimate
};

DpResult dp_step(const Y& y0, double t, double h, const std::function<double(double)>& thrust,
                 const Propulsion& prop, const Steering& steering, const Constants& c,
                 const Y& scale) {
    static constexpr double C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double A[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    // 5th-order weights equal the last stage row (FSAL); E = b5 - b4.
    static constexpr double E[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                                    -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

    Y k[7];
    k[0] = derivative(y0, thrust(t), prop, steering, c);
    for (int s = 1; s < 7; ++s) {
        Y ys = y0;
        for (int j = 0; j < s; ++j)
            for (int i = 0; i < 7; ++i) ys[i] += h * A[s][j] * k[j][i];
        k[s] = derivative(ys, thrust(t + C[s] * h), prop, steering, c);
    }

    DpResult out;
    for (int i = 0; i < 7; ++i) {
        out.y[i] = y0[i];
        for (int j = 0; j < 6; ++j) out.y[i] += h * A[6][j] * k[j][i];
    }
    double sum = 0.0;
    for (int i = 0; i < 7; ++i) {
        double e = 0.0;
        for (int j = 0; j < 7; ++j) e += E[j] * k[j][i];
        e *= h;
        double w = e / scale[i];
        sum += w * w;
    }
    out.err = std::sqrt(sum / 7.0);
    return out;
}

// One thrust piece of the burn: constant or linear-in-time level up to t_end.
struct Segment {
    double t_end;
    std::function<double(double)> thrust;
};

std::vector<Segment> make_segments(const ThrustProfile& p, double t0, double horizon) {
    std::vector<Segment> segs;
    if (p.kind == ThrustProfile::Kind::Linear) {
        double t_end = horizon;
        if (p.T2 < 0.0) t_end = std::min(t_end, t0 + p.T1 / -p.T2);  // thrust zero-crossing
        segs.push_back({t_end, [=](double t) { return p.T1 + (t - t0) * p.T2; }});
    } else {
        double T1 = p.T1, T2 = p.T2;
        segs.push_back({std::min(p.t1, horizon), [=](double) { return T1; }});
        segs.push_back({horizon, [=](double) { return T2; }});
    }
    return segs;
}

TrajectoryPoint make_point(const Y& y, double t, double thrust, const Steering& steering,
                           const Constants& c) {
    Kinematics k = kinematics_of(y);
    TrajectoryPoint p;
    p.state = {{y[0], y[1]}, {y[2], y[3]}, y[4], t};
    p.polar = {k.r, k.v, k.gamma, k.phi};
    p.theta = steering.pitch(k.r, k.v, k.gamma, c);
    double s = std::sin(p.theta);
    double rad = 1.0 - 3.0 * s * s;
    p.omega = rad >= 0.0 ? std::sqrt(c.mu / (k.r * k.r * k.r) * rad) : NAN_D;
    p.thrust = thrust;
    p.dv_gravity = y[5];
    p.dv_aoa = y[6];
    return p;
}

} // namespace

// ============================================================
// ThrustProfile / Steering
// ============================================================

double ThrustProfile::thrust_at(double t, double t0) const {
    if (kind == Kind::Linear) return T1 + (t - t0) * T2;
    return t < t1 ? T1 : T2;
}

double ThrustProfile::min_thrust_on(double t0, double t_end) const {
    if (kind == Kind::Linear)
        return std::min(thrust_at(t0, t0), thrust_at(t_end, t0));
    if (t_end < t1) return T1;
    return std::min(T1, T2);
}

double Steering::pitch(double r, double v, double gamma, const Constants& c) const {
    switch (mode) {
        case Mode::AlongVelocity: return gamma;
        case Mode::OffsetFromOptimal: return steering::solve_pitch(r, v, gamma, c) + pitch_offset;
        case Mode::Optimal: default: return steering::solve_pitch(r, v, gamma, c);
    }
}

double Trajectory::angular_range() const {
    double range = 0.0;
    for (size_t i = 1; i < points.size(); ++i) {
        double d = points[i].polar.phi - points[i - 1].polar.phi;
        if (d > PI) d -= 2.0 * PI;
        if (d < -PI) d += 2.0 * PI;
        range += d;
    }
    return range;
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::ApsisEvent: return "apsis_event";
        case StopReason::MaxTimeExceeded: return "max_time_exceeded";
        case StopReason::MassDepleted: return "mass_depleted";
        case StopReason::ThrustNonPositive: return "thrust_non_positive";
        case StopReason::SteeringSingular: return "steering_singular";
    }
    return "unknown";
}

// ============================================================
// Public right-hand side
// ============================================================

StateDerivative rhs(const PlanarState& state, double thrust, const Propulsion& prop,
                    const Steering& steering, const Constants& c) {
    if (state.mass <= 0.0) throw std::invalid_argument("dynamics: mass must be positive");
    Y y{state.position.x, state.position.y, state.velocity.x, state.velocity.y,
        state.mass, 0.0, 0.0};
    Y d = derivative(y, thrust, prop, steering, c);
    StateDerivative out;
    out.position_rate = {d[0], d[1]};
    out.velocity_rate = {d[2], d[3]};
    out.mass_rate = d[4];
    out.dv_gravity_rate = d[5];
    out.dv_aoa_rate = d[6];
    return out;
}

// ============================================================
// Propagation
// ============================================================

Trajectory propagate(const PlanarState& initial, const ThrustProfile& profile,
                     const Propulsion& prop, InjectionMode mode,
                     const IntegratorConfig& cfg, const Constants& c,
                     const Steering& steering) {
    if (initial.mass <= 0.0) throw std::invalid_argument("dynamics: initial mass must be positive");
    if (prop.exhaust_velocity <= 0.0)
        throw std::invalid_argument("dynamics: exhaust velocity must be positive");
    double t0 = initial.time;
    if (profile.kind == ThrustProfile::Kind::Bilevel && profile.t1 < t0)
        throw std::invalid_argument("dynamics: bilevel switching date before ignition");

    Trajectory traj;
    traj.profile = profile;
    traj.propulsion = prop;
    traj.steering = steering;
    traj.mode = mode;
    traj.constants = c;

    Y y{initial.position.x, initial.position.y, initial.velocity.x, initial.velocity.y,
        initial.mass, 0.0, 0.0};
    Kinematics k0 = kinematics_of(y);
    if (std::fabs(k0.gamma) >= PI / 2.0)
        throw std::invalid_argument("dynamics: initial flight path angle must satisfy |gamma| < pi/2");

    // Error scaling: absolute floors at the characteristic magnitudes.
    double vref = std::max(k0.v, std::sqrt(c.mu / k0.r));
    Y scale;
    const double ref[7] = {k0.r, k0.r, vref, vref, initial.mass, vref, vref};

    double horizon = t0 + cfg.max_time;
    auto segments = make_segments(profile, t0, horizon);

    traj.min_gamma = k0.gamma;
    traj.points.push_back(make_point(y, t0, profile.thrust_at(t0, t0), steering, c));

    double t = t0;
    double h = std::min(cfg.initial_step, cfg.max_step);
    double gamma_prev = k0.gamma;
    double gdot_prev = 0.0;  // set per segment below

    for (const auto& seg : segments) {
        if (profile.thrust_at(t, t0) <= 0.0 || seg.thrust(t) <= 0.0) {
            traj.stop = StopReason::ThrustNonPositive;
            return traj;
        }
        // gamma_rate jumps with the thrust level, so the grazing detector must
        // not compare rates across a bilevel switch
        gdot_prev = gamma_rate(y, seg.thrust(t), steering, c);
        bool segment_done = false;
        while (!segment_done) {
            if (t >= horizon) {
                traj.stop = StopReason::MaxTimeExceeded;
                return traj;
            }
            double h_try = std::min({h, cfg.max_step, seg.t_end - t});
            if (h_try <= 0.0) break;  // segment boundary reached
            bool at_boundary = (t + h_try >= seg.t_end);

            for (int i = 0; i < 7; ++i)
                scale[i] = cfg.abs_tol * ref[i] + cfg.rel_tol * std::fabs(y[i]);

            DpResult step;
            try {
                step = dp_step(y, t, h_try, seg.thrust, prop, steering, c, scale);
            } catch (const std::domain_error&) {
                traj.stop = StopReason::SteeringSingular;
                return traj;
            }

            if (step.err > 1.0) {
                h = h_try * std::max(0.2, 0.9 * std::pow(step.err, -0.2));
                if (h < 1e-10) {
                    traj.stop = StopReason::SteeringSingular;
                    return traj;
                }
                continue;
            }

            bool finite = true;
            for (double v : step.y) finite = finite && std::isfinite(v);
            if (step.y[4] <= 1e-6 * initial.mass || !finite) {
                if (h_try < 1e-9 || !finite) {
                    traj.stop = StopReason::MassDepleted;
                    return traj;
                }
                h = h_try * 0.5;
                continue;
            }

            Kinematics kn = kinematics_of(step.y);
            double gdot_new = gamma_rate(step.y, seg.thrust(t + h_try), steering, c);
            bool up = gamma_prev < 0.0 && kn.gamma >= 0.0;
            bool down = gamma_prev > 0.0 && kn.gamma <= 0.0;
            bool trigger = false;
            switch (mode) {
                case InjectionMode::Perigee: trigger = up; break;
                case InjectionMode::Apogee: trigger = down; break;
                case InjectionMode::FirstCrossing: trigger = up || down; break;
            }

            if (!trigger && cfg.graze_tol > 0.0) {
                // Tangent approach: gamma peaks (or dips) inside the zero band
                // without changing sign, the circular-injection limit. Whether
                // the graze is a perigee or an apogee is decided by the speed
                // against the local circular speed, not by the approach side.
                bool peak_below = gamma_prev < 0.0 && kn.gamma < 0.0 && gdot_prev > 0.0 &&
                                  gdot_new <= 0.0 &&
                                  std::max(gamma_prev, kn.gamma) > -cfg.graze_tol;
                bool dip_above = gamma_prev > 0.0 && kn.gamma > 0.0 && gdot_prev < 0.0 &&
                                 gdot_new >= 0.0 &&
                                 std::min(gamma_prev, kn.gamma) < cfg.graze_tol;
                if (peak_below || dip_above) {
                    double lo = 0.0, hi = h_try;
                    Y y_event = step.y;
                    for (int i = 0; i < 200; ++i) {
                        double mid = 0.5 * (lo + hi);
                        if (mid == lo || mid == hi) break;
                        DpResult trial = dp_step(y, t, mid, seg.thrust, prop, steering, c, scale);
                        double gd = gamma_rate(trial.y, seg.thrust(t + mid), steering, c);
                        if ((gd > 0.0) == (gdot_prev > 0.0)) {
                            lo = mid;
                        } else {
                            hi = mid;
                            y_event = trial.y;
                        }
                    }
                    // A graze terminates in every mode: near the circular
                    // limit the perigee/apogee distinction collapses (v is
                    // within a few m/s of circular), so filtering by it would
                    // re-open the discontinuity the band exists to close. The
                    // speed comparison only labels the event.
                    Kinematics ke = kinematics_of(y_event);
                    bool perigee_like = ke.v >= std::sqrt(c.mu / ke.r);
                    double t_event = t + hi;
                    traj.points.push_back(make_point(y_event, t_event,
                                                     profile.thrust_at(t_event, t0),
                                                     steering, c));
                    traj.stop = StopReason::ApsisEvent;
                    traj.grazing = true;
                    traj.injection = perigee_like ? InjectionKind::PerigeeLike
                                                  : InjectionKind::ApogeeLike;
                    return traj;
                }
            }

            if (trigger) {
                // Locate the crossing inside the step by bisection on the step
                // length; every trial is a full-accuracy embedded step.
                double lo = 0.0, hi = h_try;
                double g_hi = kn.gamma;
                Y y_event = step.y;
                double g_event = g_hi;
                for (int i = 0; i < 200 && std::fabs(g_event) > cfg.event_tol; ++i) {
                    double mid = 0.5 * (lo + hi);
                    if (mid == lo || mid == hi) break;
                    DpResult trial = dp_step(y, t, mid, seg.thrust, prop, steering, c, scale);
                    double g_mid = kinematics_of(trial.y).gamma;
                    if ((g_mid < 0.0) == (gamma_prev < 0.0)) {
                        lo = mid;
                    } else {
                        hi = mid;
                        y_event = trial.y;
                        g_event = g_mid;
                    }
                }
                double t_event = t + hi;
                traj.min_gamma = std::min(traj.min_gamma, kinematics_of(y_event).gamma);
                traj.points.push_back(
                    make_point(y_event, t_event, profile.thrust_at(t_event, t0), steering, c));
                traj.stop = StopReason::ApsisEvent;
                traj.injection = up ? InjectionKind::PerigeeLike : InjectionKind::ApogeeLike;
                return traj;
            }

            t += h_try;
            y = step.y;
            gamma_prev = kn.gamma;
            gdot_prev = gdot_new;
            traj.min_gamma = std::min(traj.min_gamma, kn.gamma);
            // recorded thrust follows the profile's left-closed convention,
            // which differs from the segment value only at the switch itself
            traj.points.push_back(make_point(y, t, profile.thrust_at(t, t0), steering, c));

            double grow = step.err > 0.0 ? 0.9 * std::pow(step.err, -0.2) : 5.0;
            h = h_try * std::clamp(grow, 0.2, 5.0);
            if (at_boundary && t >= seg.t_end) segment_done = true;
        }
        // Reaching the end of the last segment without an event means the
        // thrust law ran out (linear zero-crossing) rather than max_time.
        if (&seg == &segments.back() || seg.t_end >= horizon) {
            if (t >= horizon - 1e-9) {
                traj.stop = StopReason::MaxTimeExceeded;
            } else {
                traj.stop = StopReason::ThrustNonPositive;
            }
            if (&seg == &segments.back()) return traj;
        }
    }
    return traj;
}

} // namespace ascent::dynamics
