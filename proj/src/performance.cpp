#include "ascent/performance.hpp"

#include "ascent/steering.hpp"

#include <cmath>
#include <stdexcept>

namespace ascent::performance {

double gravity_loss_estimate(double r0, double gamma0, const Constants& c) {
    if (r0 <= 0.0) throw std::invalid_argument("performance: radius must be positive");
    return 0.25 * std::sqrt(c.mu / r0) * gamma0 * gamma0;
}

double final_mass_estimate(double m0, double v0, const orbital::OrbitShape& target,
                           double dv_g, double v_e, const Constants& c) {
    if (m0 <= 0.0) throw std::invalid_argument("performance: mass must be positive");
    if (v_e <= 0.0) throw std::invalid_argument("performance: exhaust velocity must be positive");
    double v_p = orbital::apsis_speed(target, orbital::Apsis::Perigee, c);
    return m0 * std::exp(-(dv_g + v_p - v0) / v_e);
}

PerformanceEstimate estimate(double r0, double v0, double gamma0, double m0,
                             const orbital::OrbitShape& target, double v_e,
                             double thrust_ref, const Constants& c) {
    PerformanceEstimate e;
    e.dv_gravity = gravity_loss_estimate(r0, gamma0, c);
    e.perigee_speed = orbital::apsis_speed(target, orbital::Apsis::Perigee, c);
    e.dv_total_impulse = (e.perigee_speed - v0) + e.dv_gravity;
    e.final_mass = m0 * std::exp(-e.dv_total_impulse / v_e);
    e.burn_time = thrust_ref > 0.0 ? (m0 - e.final_mass) * v_e / thrust_ref : 0.0;
    return e;
}

LossBreakdown accumulate_losses(const dynamics::Trajectory& traj) {
    const auto& first = traj.initial();
    const auto& last = traj.final();
    LossBreakdown b;
    b.dv_gravity = last.dv_gravity;
    b.dv_aoa = last.dv_aoa;
    b.dv_total_impulse = (last.polar.v - first.polar.v) + b.dv_gravity + b.dv_aoa;
    double tsiolkovsky = traj.propulsion.exhaust_velocity
                         * std::log(first.state.mass / last.state.mass);
    b.impulse_residual = std::fabs(b.dv_total_impulse - tsiolkovsky);
    return b;
}

double gravity_loss_from_rates(double r0, double theta0, double rf, const Constants& c) {
    double w0 = steering::angular_rate(r0, theta0, c);
    double wf = steering::angular_rate(rf, 0.0, c);
    return (2.0 / 3.0) * r0 * std::fabs(wf - w0);
}

} // namespace ascent::performance
