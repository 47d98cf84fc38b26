#include "ascent/steering.hpp"

#include <cmath>
#include <stdexcept>

namespace ascent::steering {

namespace {
constexpr double RESIDUAL_TOL = 1e-13;
constexpr int MAX_ITER = 200;
} // namespace

double theta_max() {
    static const double v = std::asin(1.0 / std::sqrt(3.0));
    return v;
}

double pitch_residual(double r, double v, double gamma, double theta, const Constants& c) {
    double s = std::sin(theta);
    double vc = std::sqrt(c.mu / r);
    return std::sin(gamma - theta) - (vc / v) * s / std::sqrt(1.0 - 3.0 * s * s);
}

double solve_pitch(double r, double v, double gamma, const Constants& c) {
    if (r <= 0.0) throw std::invalid_argument("steering: radius must be positive");
    if (v <= 0.0) throw std::invalid_argument("steering: speed must be positive");
    if (std::fabs(gamma) >= PI / 2.0)
        throw std::domain_error("steering: pitch law singular at |gamma| >= pi/2");
    if (gamma == 0.0) return 0.0;

    auto f = [&](double th) { return pitch_residual(r, v, gamma, th, c); };
    double vc = std::sqrt(c.mu / r);
    // df/dtheta = -cos(gamma-theta) - (vc/v) cos(theta) / (1-3 sin^2)^{3/2},
    // strictly negative on the root branch, so the root is unique there.
    auto df = [&](double th) {
        double s = std::sin(th), q = 1.0 - 3.0 * s * s;
        return -std::cos(gamma - th) - (vc / v) * std::cos(th) / (q * std::sqrt(q));
    };

    // Bracket: f(0) = sin(gamma) has the sign of gamma, and f diverges to
    // -sign(gamma)*inf as |theta| -> theta_max.
    double sign = gamma > 0.0 ? 1.0 : -1.0;
    double a = 0.0, fa = f(a);
    double b = sign * theta_max() * (1.0 - 1e-12);
    if (fa == 0.0) return a;

    // Bisect to a narrow bracket, then polish with safeguarded Newton steps.
    for (int i = 0; i < 60 && std::fabs(b - a) > 1e-3; ++i) {
        double mid = 0.5 * (a + b);
        double fm = f(mid);
        if ((fm > 0.0) == (fa > 0.0)) { a = mid; fa = fm; } else { b = mid; }
    }
    double x = 0.5 * (a + b);
    double fx = f(x);
    for (int i = 0; i < MAX_ITER && std::fabs(fx) > RESIDUAL_TOL; ++i) {
        if ((fx > 0.0) == (fa > 0.0)) { a = x; fa = fx; } else { b = x; }
        double x_new = x - fx / df(x);
        bool inside = (x_new > std::fmin(a, b)) && (x_new < std::fmax(a, b));
        x = inside ? x_new : 0.5 * (a + b);
        fx = f(x);
    }
    return x;
}

double angular_rate(double r, double theta, const Constants& c) {
    if (r <= 0.0) throw std::invalid_argument("steering: radius must be positive");
    double s = std::sin(theta);
    double rad = 1.0 - 3.0 * s * s;
    if (rad < 0.0) {
        if (rad < -1e-12)
            throw std::domain_error("steering: angular rate undefined for sin^2(theta) > 1/3");
        rad = 0.0;  // rounding at the boundary |theta| = theta_max
    }
    return std::sqrt(c.mu / (r * r * r) * rad);
}

double angular_rate_derivative(double r, double theta, const Constants& c) {
    if (r <= 0.0) throw std::invalid_argument("steering: radius must be positive");
    return -(3.0 * c.mu / (r * r * r)) * std::sin(theta) * std::cos(theta);
}

CostateReconstruction reconstruct_costates(double theta, double phi, double omega,
                                           double mass, double v_e) {
    if (mass <= 0.0) throw std::invalid_argument("steering: mass must be positive");
    if (v_e <= 0.0) throw std::invalid_argument("steering: exhaust velocity must be positive");
    double beta = theta - phi;
    CostateReconstruction k;
    k.p_r = {omega * -std::cos(beta), omega * std::sin(beta)};
    k.p_v = {std::sin(beta), std::cos(beta)};
    k.p_m = v_e / mass;
    return k;
}

Vec2 thrust_direction(double theta, double phi) {
    return {-std::sin(phi - theta), std::cos(phi - theta)};
}

} // namespace ascent::steering
