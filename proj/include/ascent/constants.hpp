#pragma once

namespace ascent {

/**
 * Physical constants for the central body and unit conversions.
 *
 * Defaults are the values used throughout: equatorial Earth radius and the
 * gravitational parameter of a spherical Earth. g0 only enters thrust-to-weight
 * heuristics and Isp conversion, never the dynamics.
 */
struct Constants {
    double mu = 3.986005e14;          // gravitational parameter [m^3/s^2]
    double earth_radius = 6378137.0;  // equatorial radius [m]
    double g0 = 9.80665;              // standard gravity [m/s^2]
};

constexpr double PI = 3.14159265358979323846;
constexpr double DEG = PI / 180.0;  // multiply degrees by DEG to get radians

inline double deg2rad(double d) { return d * DEG; }
inline double rad2deg(double r) { return r / DEG; }

} // namespace ascent
