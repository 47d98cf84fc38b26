#include "ascent/orbital.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ascent::orbital {

namespace {
constexpr double NAN_D = std::numeric_limits<double>::quiet_NaN();

OrbitShape shape_from_rv(double r, double v, double h, const Constants& c) {
    if (r <= 0.0) throw std::invalid_argument("orbital: radius must be positive");
    if (v <= 0.0) throw std::invalid_argument("orbital: speed must be positive");
    return shape_from_energy_momentum(0.5 * v * v - c.mu / r, h, c);
}
} // namespace

OrbitShape shape_from_energy_momentum(double energy, double ang_momentum, const Constants& c) {
    OrbitShape s;
    s.energy = energy;
    s.ang_momentum = std::fabs(ang_momentum);
    s.closed = energy < 0.0;
    s.radial = s.ang_momentum == 0.0;

    // a = -mu/(2w); e from h^2 = mu a (1 - e^2)
    s.semi_major = -c.mu / (2.0 * energy);  // inf at w = 0, negative when open
    double e2 = 1.0 - s.ang_momentum * s.ang_momentum / (c.mu * s.semi_major);
    s.eccentricity = std::sqrt(std::max(0.0, e2));

    if (s.closed && !s.radial) {
        s.apoapsis_radius = s.semi_major * (1.0 + s.eccentricity);
        s.periapsis_radius = s.semi_major * (1.0 - s.eccentricity);
    } else {
        s.apoapsis_radius = NAN_D;
        s.periapsis_radius = NAN_D;
    }
    return s;
}

OrbitShape shape_from_state(const PlanarState& state, const Constants& c) {
    double r = state.position.norm();
    double v = state.velocity.norm();
    return shape_from_rv(r, v, state.position.cross(state.velocity), c);
}

OrbitShape shape_from_state(const PolarKinematics& polar, const Constants& c) {
    return shape_from_rv(polar.r, polar.v, polar.r * polar.v * std::cos(polar.gamma), c);
}

OrbitShape shape_from_apsides(double apogee_alt, double perigee_alt, const Constants& c) {
    if (apogee_alt < perigee_alt)
        throw std::invalid_argument("orbital: apogee altitude below perigee altitude");
    double r_a = c.earth_radius + apogee_alt;
    double r_p = c.earth_radius + perigee_alt;
    if (r_p <= 0.0)
        throw std::invalid_argument("orbital: perigee radius must be positive");

    double a = 0.5 * (r_a + r_p);
    double e = (r_a - r_p) / (r_a + r_p);
    OrbitShape s;
    s.semi_major = a;
    s.eccentricity = e;
    s.apoapsis_radius = r_a;
    s.periapsis_radius = r_p;
    s.energy = -c.mu / (2.0 * a);
    s.ang_momentum = std::sqrt(c.mu * a * (1.0 - e * e));
    s.closed = true;
    s.radial = false;
    return s;
}

double apsis_speed(const OrbitShape& shape, Apsis which, const Constants&) {
    if (!shape.closed)
        throw std::domain_error("orbital: apsis speed undefined for open orbits");
    if (shape.radial || shape.ang_momentum == 0.0)
        throw std::domain_error("orbital: apsis speed undefined for radial orbits");
    double r = (which == Apsis::Perigee) ? shape.periapsis_radius : shape.apoapsis_radius;
    return shape.ang_momentum / r;  // gamma = 0 at an apsis
}

double circular_speed(double r, const Constants& c) {
    if (r <= 0.0) throw std::invalid_argument("orbital: radius must be positive");
    return std::sqrt(c.mu / r);
}

PolarKinematics to_polar(const PlanarState& state) {
    PolarKinematics p;
    p.r = state.position.norm();
    p.v = state.velocity.norm();
    if (p.r <= 0.0) throw std::invalid_argument("orbital: radius must be positive");
    if (p.v == 0.0) throw std::invalid_argument("orbital: flight path angle undefined at v = 0");
    p.phi = std::atan2(state.position.y, state.position.x);
    double s = state.position.dot(state.velocity) / (p.r * p.v);
    p.gamma = std::asin(std::clamp(s, -1.0, 1.0));
    return p;
}

PlanarState to_cartesian(const PolarKinematics& polar, double mass, double time) {
    PlanarState s;
    s.position = {polar.r * std::cos(polar.phi), polar.r * std::sin(polar.phi)};
    s.velocity = {-polar.v * std::sin(polar.phi - polar.gamma),
                  polar.v * std::cos(polar.phi - polar.gamma)};
    s.mass = mass;
    s.time = time;
    return s;
}

} // namespace ascent::orbital
