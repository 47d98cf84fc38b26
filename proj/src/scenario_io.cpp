#include "ascent/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ascent::io {

using nlohmann::json;
using solver::ResidualMode;
using solver::Scenario;
using dynamics::InjectionMode;
using dynamics::ThrustProfile;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error("scenario: " + msg); }

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) fail("unknown key '" + it.key() + "' in " + where);
    }
}

double number(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) fail("'" + key + "' must be a number");
    return obj[key].get<double>();
}

InjectionMode parse_mode(const std::string& s) {
    if (s == "perigee") return InjectionMode::Perigee;
    if (s == "apogee") return InjectionMode::Apogee;
    if (s == "first") return InjectionMode::FirstCrossing;
    fail("mode must be one of perigee|apogee|first");
}

std::string mode_name(InjectionMode m) {
    switch (m) {
        case InjectionMode::Perigee: return "perigee";
        case InjectionMode::Apogee: return "apogee";
        case InjectionMode::FirstCrossing: return "first";
    }
    return "perigee";
}

} // namespace

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    check_keys(doc, "document",
               {"constants", "initial", "target", "propulsion", "profile", "mode",
                "integrator", "solver"});

    Scenario sc;

    json cst = doc.value("constants", json::object());
    check_keys(cst, "constants", {"mu_m3s2", "earth_radius_m", "g0_ms2"});
    sc.constants.mu = number(cst, "mu_m3s2", sc.constants.mu);
    sc.constants.earth_radius = number(cst, "earth_radius_m", sc.constants.earth_radius);
    sc.constants.g0 = number(cst, "g0_ms2", sc.constants.g0);
    if (sc.constants.mu <= 0.0) fail("mu_m3s2 must be positive");
    if (sc.constants.earth_radius <= 0.0) fail("earth_radius_m must be positive");

    json ini = doc.value("initial", json::object());
    check_keys(ini, "initial", {"altitude_km", "velocity_ms", "gamma_deg", "mass_kg"});
    double alt_km = number(ini, "altitude_km", 150.0);
    double v0 = number(ini, "velocity_ms", 5000.0);
    double gamma_deg = number(ini, "gamma_deg", 30.0);
    sc.initial_mass = number(ini, "mass_kg", 10000.0);
    sc.initial = {sc.constants.earth_radius + alt_km * 1e3, v0, deg2rad(gamma_deg), 0.0};
    if (sc.initial.r <= 0.0) fail("initial radius must be positive");
    if (sc.initial.v <= 0.0) fail("initial velocity must be positive");
    if (std::fabs(gamma_deg) >= 90.0) fail("initial |gamma_deg| must be below 90");
    if (sc.initial_mass <= 0.0) fail("initial mass must be positive");

    json tgt = doc.value("target", json::object());
    check_keys(tgt, "target", {"apogee_km", "perigee_km"});
    double apo_km = number(tgt, "apogee_km", 36000.0);
    double per_km = number(tgt, "perigee_km", 300.0);
    try {
        sc.target = orbital::shape_from_apsides(apo_km * 1e3, per_km * 1e3, sc.constants);
    } catch (const std::exception& e) {
        fail(std::string("target: ") + e.what());
    }

    json prp = doc.value("propulsion", json::object());
    check_keys(prp, "propulsion", {"isp_s", "ve_ms"});
    if (prp.contains("isp_s") && prp.contains("ve_ms"))
        fail("give either isp_s or ve_ms, not both");
    if (prp.contains("isp_s"))
        sc.propulsion = dynamics::Propulsion::from_isp(number(prp, "isp_s", 300.0), sc.constants);
    else
        sc.propulsion = dynamics::Propulsion::from_exhaust_velocity(number(prp, "ve_ms", 2942.0));
    if (sc.propulsion.exhaust_velocity <= 0.0) fail("exhaust velocity must be positive");

    json prf = doc.value("profile", json::object());
    check_keys(prf, "profile", {"kind", "t1_s", "guess"});
    std::string kind = prf.value("kind", "linear");
    if (kind == "linear") {
        sc.profile_kind = ThrustProfile::Kind::Linear;
        if (prf.contains("t1_s")) fail("t1_s applies to the bilevel profile only");
    } else if (kind == "bilevel") {
        sc.profile_kind = ThrustProfile::Kind::Bilevel;
        if (!prf.contains("t1_s")) fail("bilevel profile requires t1_s");
        sc.t1 = number(prf, "t1_s", 0.0);
        if (sc.t1 < 0.0) fail("t1_s must be non-negative");
    } else {
        fail("profile kind must be linear or bilevel");
    }
    if (prf.contains("guess")) {
        json g = prf["guess"];
        check_keys(g, "profile.guess", {"T1_N", "T2"});
        if (!g.contains("T1_N") || !g.contains("T2"))
            fail("profile.guess requires T1_N and T2 (N/s for linear, N for bilevel)");
        sc.guess = {{number(g, "T1_N", 0.0), number(g, "T2", 0.0)}};
    }

    if (doc.contains("mode")) {
        if (!doc["mode"].is_string()) fail("mode must be a string");
        sc.mode = parse_mode(doc["mode"].get<std::string>());
    }

    json itg = doc.value("integrator", json::object());
    check_keys(itg, "integrator",
               {"rel_tol", "abs_tol", "max_step_s", "event_tol_rad", "max_time_s"});
    sc.integrator.rel_tol = number(itg, "rel_tol", sc.integrator.rel_tol);
    sc.integrator.abs_tol = number(itg, "abs_tol", sc.integrator.abs_tol);
    sc.integrator.max_step = number(itg, "max_step_s", sc.integrator.max_step);
    sc.integrator.event_tol = number(itg, "event_tol_rad", sc.integrator.event_tol);
    sc.integrator.max_time = number(itg, "max_time_s", sc.integrator.max_time);
    if (sc.integrator.rel_tol <= 0.0 || sc.integrator.abs_tol <= 0.0 ||
        sc.integrator.max_step <= 0.0 || sc.integrator.event_tol <= 0.0 ||
        sc.integrator.max_time <= 0.0)
        fail("integrator settings must be positive");

    json slv = doc.value("solver", json::object());
    check_keys(slv, "solver",
               {"residual_tol_m", "max_iter", "fd_rel_step", "initial_twr", "residual_mode",
                "max_halvings"});
    sc.solver.residual_tol = number(slv, "residual_tol_m", sc.solver.residual_tol);
    sc.solver.max_iter = static_cast<int>(number(slv, "max_iter", sc.solver.max_iter));
    sc.solver.fd_rel_step = number(slv, "fd_rel_step", sc.solver.fd_rel_step);
    sc.solver.initial_twr = number(slv, "initial_twr", sc.solver.initial_twr);
    sc.solver.max_halvings = static_cast<int>(number(slv, "max_halvings", sc.solver.max_halvings));
    if (slv.contains("residual_mode")) {
        std::string rm = slv["residual_mode"].get<std::string>();
        if (rm == "apsis_radii") sc.solver.residual_mode = ResidualMode::ApsisRadii;
        else if (rm == "energy_momentum") sc.solver.residual_mode = ResidualMode::EnergyMomentum;
        else fail("residual_mode must be apsis_radii or energy_momentum");
    }
    if (sc.solver.residual_tol <= 0.0 || sc.solver.max_iter <= 0 || sc.solver.fd_rel_step <= 0.0 ||
        sc.solver.initial_twr <= 0.0 || sc.solver.max_halvings <= 0)
        fail("solver settings must be positive");

    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string echo_scenario(const Scenario& sc) {
    json doc;
    doc["constants"] = {{"mu_m3s2", sc.constants.mu},
                        {"earth_radius_m", sc.constants.earth_radius},
                        {"g0_ms2", sc.constants.g0}};
    doc["initial"] = {{"altitude_km", (sc.initial.r - sc.constants.earth_radius) / 1e3},
                      {"velocity_ms", sc.initial.v},
                      {"gamma_deg", rad2deg(sc.initial.gamma)},
                      {"mass_kg", sc.initial_mass}};
    doc["target"] = {{"apogee_km", (sc.target.apoapsis_radius - sc.constants.earth_radius) / 1e3},
                     {"perigee_km", (sc.target.periapsis_radius - sc.constants.earth_radius) / 1e3}};
    doc["propulsion"] = {{"ve_ms", sc.propulsion.exhaust_velocity}};
    doc["profile"] = json::object();
    doc["profile"]["kind"] =
        sc.profile_kind == ThrustProfile::Kind::Linear ? "linear" : "bilevel";
    if (sc.profile_kind == ThrustProfile::Kind::Bilevel) doc["profile"]["t1_s"] = sc.t1;
    if (sc.guess)
        doc["profile"]["guess"] = {{"T1_N", (*sc.guess)[0]}, {"T2", (*sc.guess)[1]}};
    doc["mode"] = mode_name(sc.mode);
    doc["integrator"] = {{"rel_tol", sc.integrator.rel_tol},
                         {"abs_tol", sc.integrator.abs_tol},
                         {"max_step_s", sc.integrator.max_step},
                         {"event_tol_rad", sc.integrator.event_tol},
                         {"max_time_s", sc.integrator.max_time}};
    doc["solver"] = {{"residual_tol_m", sc.solver.residual_tol},
                     {"max_iter", sc.solver.max_iter},
                     {"fd_rel_step", sc.solver.fd_rel_step},
                     {"initial_twr", sc.solver.initial_twr},
                     {"max_halvings", sc.solver.max_halvings},
                     {"residual_mode",
                      sc.solver.residual_mode == ResidualMode::ApsisRadii ? "apsis_radii"
                                                                          : "energy_momentum"}};
    return doc.dump(2) + "\n";
}

} // namespace ascent::io
