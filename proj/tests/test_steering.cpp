#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ascent/orbital.hpp"
#include "ascent/steering.hpp"

#include <cmath>
#include <random>

using namespace ascent;
using namespace ascent::steering;

namespace {
const Constants C;

// Independent root finder: scan the residual on a uniform grid for a sign
// change, then bisect. Deliberately brute force; it shares no code path with
// solve_pitch beyond the residual formula itself.
double grid_scan_pitch(double r, double v, double gamma, int grid_points) {
    if (gamma == 0.0) return 0.0;
    double sign = gamma > 0.0 ? 1.0 : -1.0;
    double hi = sign * theta_max() * (1.0 - 1e-9);
    double prev_t = 0.0;
    double prev_f = pitch_residual(r, v, gamma, prev_t, C);
    for (int i = 1; i <= grid_points; ++i) {
        double t = hi * i / grid_points;
        double f = pitch_residual(r, v, gamma, t, C);
        if ((f > 0.0) != (prev_f > 0.0)) {
            double a = prev_t, b = t;
            for (int k = 0; k < 200; ++k) {
                double mid = 0.5 * (a + b);
                double fm = pitch_residual(r, v, gamma, mid, C);
                if ((fm > 0.0) == (prev_f > 0.0)) a = mid; else b = mid;
            }
            return 0.5 * (a + b);
        }
        prev_t = t;
        prev_f = f;
    }
    return hi;
}
} // namespace

TEST_CASE("pitch is zero on a horizontal flight path") {
    CHECK(solve_pitch(6.7e6, 7000.0, 0.0, C) == 0.0);
}

TEST_CASE("small-angle limit: theta is half of gamma") {
    double r = 6.7e6;
    double v = orbital::circular_speed(r, C);
    double theta = solve_pitch(r, v, 0.02, C);
    CHECK(theta == doctest::Approx(0.01).epsilon(0.02));
}

TEST_CASE("ignition-state root agrees with the brute-force scan") {
    double r = 6528137.0, v = 5000.0, gamma = deg2rad(30.0);
    double theta = solve_pitch(r, v, gamma, C);
    double oracle = grid_scan_pitch(r, v, gamma, 1000000);
    CHECK(std::fabs(theta - oracle) < 1e-9);
    CHECK(std::fabs(pitch_residual(r, v, gamma, theta, C)) < 1e-13);
}

TEST_CASE("pitch solver properties over randomized states") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> rad(6.4e6, 5.0e7);
    std::uniform_real_distribution<double> vel(500.0, 11000.0);
    std::uniform_real_distribution<double> fpa(-deg2rad(85.0), deg2rad(85.0));

    for (int i = 0; i < 1000; ++i) {
        double r = rad(rng), v = vel(rng), gamma = fpa(rng);
        double theta = solve_pitch(r, v, gamma, C);

        CHECK(std::fabs(pitch_residual(r, v, gamma, theta, C)) < 1e-13);
        CHECK(std::fabs(theta) < theta_max());
        if (gamma > 0.0) CHECK(theta > 0.0);
        if (gamma < 0.0) CHECK(theta < 0.0);

        double oracle = grid_scan_pitch(r, v, gamma, 4096);
        CHECK(std::fabs(theta - oracle) < 1e-9);
    }
}

TEST_CASE("pitch increases with gamma at fixed (r, v)") {
    double r = 6.6e6, v = 6000.0;
    double prev = solve_pitch(r, v, deg2rad(-80.0), C);
    for (int i = -79; i <= 80; ++i) {
        double theta = solve_pitch(r, v, deg2rad(i), C);
        CHECK(theta > prev);
        prev = theta;
    }
}

TEST_CASE("small-angle law for gentle flight paths") {
    // First order in gamma the root is gamma / (1 + vc/v), so the half-angle
    // rule 2 theta ~ gamma holds within 10% exactly when vc/v is within
    // (9/11, 11/9). The 10% band is checked safely inside that region and the
    // first-order ratio itself across a wider one.
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> fpa(-deg2rad(3.0), deg2rad(3.0));
    std::uniform_real_distribution<double> ten_pct(0.85, 1.2);
    std::uniform_real_distribution<double> wide(0.8, 1.25);
    double r = 6.7e6;
    double vc = orbital::circular_speed(r, C);
    for (int i = 0; i < 300; ++i) {
        double gamma = fpa(rng);
        if (gamma == 0.0) continue;
        double theta = solve_pitch(r, vc * ten_pct(rng), gamma, C);
        CHECK(std::fabs(2.0 * theta - gamma) < 0.1 * std::fabs(gamma));

        double ratio = wide(rng);
        double theta_w = solve_pitch(r, vc * ratio, gamma, C);
        double first_order = gamma / (1.0 + 1.0 / ratio);
        CHECK(std::fabs(theta_w - first_order) < 0.02 * std::fabs(gamma) + 1e-6);
    }
}

TEST_CASE("vertical flight path rejected") {
    CHECK_THROWS_AS(solve_pitch(6.6e6, 5000.0, PI / 2.0, C), std::domain_error);
    CHECK_THROWS_AS(solve_pitch(6.6e6, 5000.0, -PI / 2.0, C), std::domain_error);
}

TEST_CASE("angular rate magnitude") {
    double r = 6528137.0;
    SUBCASE("horizontal thrust gives the circular rate") {
        CHECK(angular_rate(r, 0.0, C) ==
              doctest::Approx(std::sqrt(C.mu / (r * r * r))).epsilon(1e-14));
        CHECK(angular_rate(r, 0.0, C) == doctest::Approx(1.197e-3).epsilon(1e-3));
    }
    SUBCASE("rate vanishes at the pitch bound") {
        CHECK(angular_rate(r, theta_max(), C) == doctest::Approx(0.0).scale(1e-6));
    }
    SUBCASE("10 degree pitch") {
        double th = deg2rad(10.0);
        double expected = std::sqrt(C.mu / (r * r * r))
                          * std::sqrt(1.0 - 3.0 * std::sin(th) * std::sin(th));
        CHECK(angular_rate(r, th, C) == doctest::Approx(expected).epsilon(1e-14));
    }
    SUBCASE("domain error beyond the bound") {
        CHECK_THROWS_AS(angular_rate(r, 0.7, C), std::domain_error);
    }
}

TEST_CASE("angular rate derivative formula") {
    double r = 6.6e6;
    CHECK(angular_rate_derivative(r, 0.0, C) == 0.0);
    CHECK(angular_rate_derivative(r, PI / 4.0, C) ==
          doctest::Approx(-1.5 * C.mu / (r * r * r)).epsilon(1e-14));
    // odd in theta
    CHECK(angular_rate_derivative(r, 0.2, C) ==
          doctest::Approx(-angular_rate_derivative(r, -0.2, C)).epsilon(1e-14));
}

TEST_CASE("costate reconstruction") {
    SUBCASE("theta equal to phi") {
        auto k = reconstruct_costates(0.4, 0.4, 1.1e-3, 5000.0, 2942.0);
        CHECK(k.p_v.x == doctest::Approx(0.0));
        CHECK(k.p_v.y == doctest::Approx(1.0));
        CHECK(k.p_r.x == doctest::Approx(-1.1e-3));
        CHECK(k.p_r.y == doctest::Approx(0.0).scale(1e-3));
        CHECK(k.p_m == doctest::Approx(2942.0 / 5000.0));
    }
    SUBCASE("p_v is always unit and the switching identity holds") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> ang(-PI, PI);
        std::uniform_real_distribution<double> mass(100.0, 20000.0);
        for (int i = 0; i < 200; ++i) {
            double m = mass(rng), ve = 2942.0;
            auto k = reconstruct_costates(ang(rng), ang(rng), 1e-3, m, ve);
            CHECK(k.p_v.norm() == doctest::Approx(1.0).epsilon(1e-15));
            // Phi = |p_v|/m - p_m/v_e vanishes under this normalization
            CHECK(k.p_v.norm() / m - k.p_m / ve == doctest::Approx(0.0).scale(1.0 / m));
        }
    }
}

TEST_CASE("thrust direction frame conventions") {
    auto u0 = thrust_direction(0.0, 0.0);
    CHECK(u0.x == doctest::Approx(0.0));
    CHECK(u0.y == doctest::Approx(1.0));

    auto up = thrust_direction(PI / 2.0, 0.0);
    CHECK(up.x == doctest::Approx(1.0));
    CHECK(up.y == doctest::Approx(0.0).scale(1.0));

    // pitch 30 at longitude 60: projection on the local vertical is sin(30)
    double phi = deg2rad(60.0);
    auto u = thrust_direction(deg2rad(30.0), phi);
    Vec2 radial{std::cos(phi), std::sin(phi)};
    CHECK(u.dot(radial) == doctest::Approx(std::sin(deg2rad(30.0))).epsilon(1e-14));
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-15));

    // matches the velocity-costate direction
    auto k = reconstruct_costates(deg2rad(30.0), phi, 1.0, 1.0, 1.0);
    CHECK(u.x == doctest::Approx(k.p_v.x).epsilon(1e-15));
    CHECK(u.y == doctest::Approx(k.p_v.y).epsilon(1e-15));
}

TEST_CASE("the reconstructed costates annihilate the free Hamiltonian") {
    // p_r . v + p_v . g = 0 with the sign assignment omega < 0; this restates
    // the pitch equation and pins the convention the verification suite
    // resolves empirically.
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> rad(6.45e6, 2.0e7);
    std::uniform_real_distribution<double> vel(1000.0, 10500.0);
    std::uniform_real_distribution<double> fpa(-deg2rad(85.0), deg2rad(85.0));
    std::uniform_real_distribution<double> lon(-PI, PI);
    for (int i = 0; i < 300; ++i) {
        double r = rad(rng), v = vel(rng), gamma = fpa(rng), phi = lon(rng);
        double theta = solve_pitch(r, v, gamma, C);
        double omega = angular_rate(r, theta, C);
        auto k = reconstruct_costates(theta, phi, -omega, 3000.0, 2942.0);
        auto state = orbital::to_cartesian({r, v, gamma, phi}, 3000.0, 0.0);
        Vec2 g = state.position * (-C.mu / (r * r * r));
        double H0 = k.p_r.dot(state.velocity) + k.p_v.dot(g);
        CHECK(std::fabs(H0) * r * r / C.mu < 1e-10);

        // positive rescaling of all costates leaves the zero set unchanged
        double lam = 3.7;
        double H0s = (lam * k.p_r).dot(state.velocity) + (lam * k.p_v).dot(g);
        CHECK(std::fabs(H0s) * r * r / C.mu < lam * 1e-10);
    }
}
