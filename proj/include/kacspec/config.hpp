#pragma once

/*
 * config.hpp - flat key = value experiment configuration.
 *
 * Diff-friendly single-level format: one `key = value` per line, `#` starts
 * a comment, blank lines ignored.  Every key has a documented default, so the
 * empty file is a valid config.  Unknown keys, duplicate keys, malformed
 * values and out-of-range values are hard errors that cite the offending
 * line.  The effective config echoes every field with 17-significant-digit
 * floats and reparses to an equal RunConfig.
 */

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cross_section.hpp"
#include "integrator.hpp"
#include "mollifier.hpp"
#include "quadrature.hpp"

namespace kacspec {

// ── RunConfig ─────────────────────────────────────────────────────────────────
struct RunConfig {
    // cross section and angular quadrature
    double s = 0.75;
    double b0 = 0.05;
    double theta_cut = 1e-4;
    std::string angle_map = "full_angle";        // full_angle | half_angle
    std::string quad_scheme = "gauss_panels";    // gauss_panels | graded_trapezoid
    std::uint64_t quad_nodes = 64;

    // frequency grid
    std::uint64_t grid_n = 513;
    double xi_max = 32.0;

    // integrator
    double t_end = 0.5;
    double dt_initial = 1e-3;
    double dt_max = 0.05;
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    double output_every = 0.1;
    double mass_drift_tol = 1e-6;
    double energy_drift_tol = 1e-3;

    // initial datum
    std::string initial_datum = "laplace";  // gaussian | laplace | uniform_ball_3d | tabulated
    std::string tabulated_path;
    std::string tabulated_format = "xi_fhat";  // xi_fhat | v_f
    double ball_radius = 1.0;
    double ball_density = 0.23873241463784300;  // 3/(4 pi): unit mass at radius 1

    // mollifier families
    double exp_c0 = 0.1;
    double exp_alpha = 1.0;
    double exp_delta = 0.0625;
    double poly_N = 4.0;
    double poly_T0 = 1.0;
    double poly_delta = 0.0625;

    // smoothing fit
    double fit_alpha = 1.0;
    double fit_xi_lo = 5.0;
    double fit_xi_hi = 25.0;
    double fit_floor = 1e-14;
    std::string trajectory_path;  // fit-smoothing input; empty = evolve per config

    // commutator and coercivity probes
    std::string comm_deltas = "0.5,0.25,0.125,0.0625";
    double comm_t = 0.1;
    std::string coercivity_probes = "0,2,4,8,16,24";

    // velocity-space oracle comparison
    std::uint64_t oracle_nv = 512;
    double oracle_vmax = 28.0;
    std::uint64_t oracle_ntheta = 128;
    double oracle_tol = 1e-4;

    // radial 3D reduction
    std::uint64_t radial_n = 2048;
    double r_max = 8.0;
    double lift_c0 = 1.0;
    double roundtrip_tol = 5e-6;

    // reporting
    std::string norm_specs = "0:0,2:2";  // comma list of k:l pairs
    std::uint64_t rng_seed = 12345;

    bool operator==(const RunConfig &o) const {
        return s == o.s && b0 == o.b0 && theta_cut == o.theta_cut
            && angle_map == o.angle_map && quad_scheme == o.quad_scheme
            && quad_nodes == o.quad_nodes && grid_n == o.grid_n && xi_max == o.xi_max
            && t_end == o.t_end && dt_initial == o.dt_initial && dt_max == o.dt_max
            && abs_tol == o.abs_tol && rel_tol == o.rel_tol
            && output_every == o.output_every && mass_drift_tol == o.mass_drift_tol
            && energy_drift_tol == o.energy_drift_tol && initial_datum == o.initial_datum
            && tabulated_path == o.tabulated_path && tabulated_format == o.tabulated_format
            && ball_radius == o.ball_radius && ball_density == o.ball_density
            && exp_c0 == o.exp_c0 && exp_alpha == o.exp_alpha && exp_delta == o.exp_delta
            && poly_N == o.poly_N && poly_T0 == o.poly_T0 && poly_delta == o.poly_delta
            && fit_alpha == o.fit_alpha && fit_xi_lo == o.fit_xi_lo
            && fit_xi_hi == o.fit_xi_hi && fit_floor == o.fit_floor
            && trajectory_path == o.trajectory_path && comm_deltas == o.comm_deltas
            && comm_t == o.comm_t && coercivity_probes == o.coercivity_probes
            && oracle_nv == o.oracle_nv && oracle_vmax == o.oracle_vmax
            && oracle_ntheta == o.oracle_ntheta && oracle_tol == o.oracle_tol
            && radial_n == o.radial_n && r_max == o.r_max && lift_c0 == o.lift_c0
            && roundtrip_tol == o.roundtrip_tol && norm_specs == o.norm_specs
            && rng_seed == o.rng_seed;
    }

    // Derived parameter bundles.
    CrossSectionParams cross_params() const {
        CrossSectionParams p;
        p.s = s;
        p.b0 = b0;
        p.theta_cut = theta_cut;
        p.angle_map = (angle_map == "half_angle") ? AngleMap::half_angle : AngleMap::full_angle;
        return p;
    }
    QuadratureScheme scheme() const {
        return (quad_scheme == "graded_trapezoid") ? QuadratureScheme::graded_trapezoid
                                                   : QuadratureScheme::gauss_panels;
    }
    IntegratorConfig integrator_config() const {
        IntegratorConfig c;
        c.t_end = t_end;
        c.dt_initial = dt_initial;
        c.dt_max = dt_max;
        c.abs_tol = abs_tol;
        c.rel_tol = rel_tol;
        c.output_every = output_every;
        c.mass_drift_tol = mass_drift_tol;
        c.energy_drift_tol = energy_drift_tol;
        return c;
    }
    ExpMollifierParams exp_params() const { return {exp_c0, exp_alpha, exp_delta}; }
    PolyMollifierParams poly_params() const { return {poly_N, poly_T0, poly_delta}; }
};

// ── Parsing ───────────────────────────────────────────────────────────────────

namespace detail {

inline std::string trim(const std::string &s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double parse_double(const std::string &v, int line, const std::string &key) {
    char *end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("line " + std::to_string(line) + ": " + key
                          + " expects a number, got '" + v + "'");
    return x;
}

inline std::uint64_t parse_uint(const std::string &v, int line, const std::string &key) {
    char *end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("line " + std::to_string(line) + ": " + key
                          + " expects a nonnegative integer, got '" + v + "'");
    return x;
}

inline void range_check(bool ok, int line, const std::string &key,
                        const std::string &constraint) {
    if (!ok)
        throw ConfigError("line " + std::to_string(line) + ": " + key
                          + " out of range; need " + constraint);
}

inline void choice_check(const std::string &v, std::initializer_list<const char *> allowed,
                         int line, const std::string &key) {
    for (const char *a : allowed)
        if (v == a) return;
    std::string opts;
    for (const char *a : allowed) {
        if (!opts.empty()) opts += " | ";
        opts += a;
    }
    throw ConfigError("line " + std::to_string(line) + ": " + key + " must be one of "
                      + opts + ", got '" + v + "'");
}

}  // namespace detail

inline std::vector<double> parse_double_list(const std::string &csv, const std::string &who) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = detail::trim(tok);
        if (tok.empty()) continue;
        out.push_back(detail::parse_double(tok, 0, who));
    }
    if (out.empty())
        throw std::invalid_argument(who + ": empty list");
    return out;
}

// "k:l" pairs -> WeightedNormSpec list (no mollifier weight).
inline std::vector<WeightedNormSpec> parse_norm_specs(const std::string &csv) {
    std::vector<WeightedNormSpec> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = detail::trim(tok);
        if (tok.empty()) continue;
        const std::size_t colon = tok.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("norm_specs: expected k:l pairs, got '" + tok + "'");
        WeightedNormSpec spec;
        spec.k = detail::parse_double(detail::trim(tok.substr(0, colon)), 0, "norm_specs");
        spec.l = static_cast<int>(detail::parse_uint(detail::trim(tok.substr(colon + 1)), 0,
                                                     "norm_specs"));
        spec.validate();
        out.push_back(spec);
    }
    return out;
}

inline RunConfig parse_config(const std::string &text) {
    RunConfig c;
    std::map<std::string, int> seen;   // key -> first line
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw detail::ConfigError("line " + std::to_string(lineno)
                                      + ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw detail::ConfigError("line " + std::to_string(lineno) + ": empty key");

        auto dup = seen.find(key);
        if (dup != seen.end())
            throw detail::ConfigError("duplicate key '" + key + "' on line "
                                      + std::to_string(lineno) + " (first set on line "
                                      + std::to_string(dup->second) + ")");
        seen[key] = lineno;

        using detail::parse_double;
        using detail::parse_uint;
        using detail::range_check;
        using detail::choice_check;

        if (key == "s") {
            c.s = parse_double(val, lineno, key);
            range_check(c.s > 0.0 && c.s < 1.0, lineno, key, "0 < s < 1");
        } else if (key == "b0") {
            c.b0 = parse_double(val, lineno, key);
            range_check(c.b0 > 0.0, lineno, key, "b0 > 0");
        } else if (key == "theta_cut") {
            c.theta_cut = parse_double(val, lineno, key);
            range_check(c.theta_cut > 0.0 && c.theta_cut < 3.14159265358979323846 / 8.0,
                        lineno, key, "0 < theta_cut < pi/8");
        } else if (key == "angle_map") {
            choice_check(val, {"full_angle", "half_angle"}, lineno, key);
            c.angle_map = val;
        } else if (key == "quad_scheme") {
            choice_check(val, {"gauss_panels", "graded_trapezoid"}, lineno, key);
            c.quad_scheme = val;
        } else if (key == "quad_nodes") {
            c.quad_nodes = parse_uint(val, lineno, key);
            range_check(c.quad_nodes >= 16, lineno, key, "quad_nodes >= 16");
        } else if (key == "grid_n") {
            c.grid_n = parse_uint(val, lineno, key);
            range_check(c.grid_n >= 9, lineno, key, "grid_n >= 9");
        } else if (key == "xi_max") {
            c.xi_max = parse_double(val, lineno, key);
            range_check(c.xi_max > 0.0, lineno, key, "xi_max > 0");
        } else if (key == "t_end") {
            c.t_end = parse_double(val, lineno, key);
            range_check(c.t_end > 0.0, lineno, key, "t_end > 0");
        } else if (key == "dt_initial") {
            c.dt_initial = parse_double(val, lineno, key);
            range_check(c.dt_initial > 0.0, lineno, key, "dt_initial > 0");
        } else if (key == "dt_max") {
            c.dt_max = parse_double(val, lineno, key);
            range_check(c.dt_max > 0.0, lineno, key, "dt_max > 0");
        } else if (key == "abs_tol") {
            c.abs_tol = parse_double(val, lineno, key);
            range_check(c.abs_tol > 0.0, lineno, key, "abs_tol > 0");
        } else if (key == "rel_tol") {
            c.rel_tol = parse_double(val, lineno, key);
            range_check(c.rel_tol > 0.0, lineno, key, "rel_tol > 0");
        } else if (key == "output_every") {
            c.output_every = parse_double(val, lineno, key);
            range_check(c.output_every > 0.0, lineno, key, "output_every > 0");
        } else if (key == "mass_drift_tol") {
            c.mass_drift_tol = parse_double(val, lineno, key);
            range_check(c.mass_drift_tol > 0.0, lineno, key, "mass_drift_tol > 0");
        } else if (key == "energy_drift_tol") {
            c.energy_drift_tol = parse_double(val, lineno, key);
            range_check(c.energy_drift_tol > 0.0, lineno, key, "energy_drift_tol > 0");
        } else if (key == "initial_datum") {
            choice_check(val, {"gaussian", "laplace", "uniform_ball_3d", "tabulated"},
                         lineno, key);
            c.initial_datum = val;
        } else if (key == "tabulated_path") {
            c.tabulated_path = val;
        } else if (key == "tabulated_format") {
            choice_check(val, {"xi_fhat", "v_f"}, lineno, key);
            c.tabulated_format = val;
        } else if (key == "ball_radius") {
            c.ball_radius = parse_double(val, lineno, key);
            range_check(c.ball_radius > 0.0, lineno, key, "ball_radius > 0");
        } else if (key == "ball_density") {
            c.ball_density = parse_double(val, lineno, key);
            range_check(c.ball_density > 0.0, lineno, key, "ball_density > 0");
        } else if (key == "exp_c0") {
            c.exp_c0 = parse_double(val, lineno, key);
            range_check(c.exp_c0 > 0.0, lineno, key, "exp_c0 > 0");
        } else if (key == "exp_alpha") {
            c.exp_alpha = parse_double(val, lineno, key);
            range_check(c.exp_alpha > 0.0 && c.exp_alpha <= 2.0, lineno, key,
                        "0 < exp_alpha <= 2");
        } else if (key == "exp_delta") {
            c.exp_delta = parse_double(val, lineno, key);
            range_check(c.exp_delta > 0.0 && c.exp_delta <= 1.0, lineno, key,
                        "0 < exp_delta <= 1");
        } else if (key == "poly_N") {
            c.poly_N = parse_double(val, lineno, key);
            range_check(c.poly_N > 0.0, lineno, key, "poly_N > 0");
        } else if (key == "poly_T0") {
            c.poly_T0 = parse_double(val, lineno, key);
            range_check(c.poly_T0 > 0.0, lineno, key, "poly_T0 > 0");
        } else if (key == "poly_delta") {
            c.poly_delta = parse_double(val, lineno, key);
            range_check(c.poly_delta > 0.0 && c.poly_delta <= 1.0, lineno, key,
                        "0 < poly_delta <= 1");
        } else if (key == "fit_alpha") {
            c.fit_alpha = parse_double(val, lineno, key);
            range_check(c.fit_alpha > 0.0 && c.fit_alpha <= 2.0, lineno, key,
                        "0 < fit_alpha <= 2");
        } else if (key == "fit_xi_lo") {
            c.fit_xi_lo = parse_double(val, lineno, key);
            range_check(c.fit_xi_lo >= 0.0, lineno, key, "fit_xi_lo >= 0");
        } else if (key == "fit_xi_hi") {
            c.fit_xi_hi = parse_double(val, lineno, key);
            range_check(c.fit_xi_hi > 0.0, lineno, key, "fit_xi_hi > 0");
        } else if (key == "fit_floor") {
            c.fit_floor = parse_double(val, lineno, key);
            range_check(c.fit_floor > 0.0, lineno, key, "fit_floor > 0");
        } else if (key == "trajectory_path") {
            c.trajectory_path = val;
        } else if (key == "comm_deltas") {
            c.comm_deltas = val;
            parse_double_list(val, "comm_deltas");
        } else if (key == "comm_t") {
            c.comm_t = parse_double(val, lineno, key);
            range_check(c.comm_t >= 0.0, lineno, key, "comm_t >= 0");
        } else if (key == "coercivity_probes") {
            c.coercivity_probes = val;
            parse_double_list(val, "coercivity_probes");
        } else if (key == "oracle_nv") {
            c.oracle_nv = parse_uint(val, lineno, key);
            range_check(c.oracle_nv >= 16, lineno, key, "oracle_nv >= 16");
        } else if (key == "oracle_vmax") {
            c.oracle_vmax = parse_double(val, lineno, key);
            range_check(c.oracle_vmax > 0.0, lineno, key, "oracle_vmax > 0");
        } else if (key == "oracle_ntheta") {
            c.oracle_ntheta = parse_uint(val, lineno, key);
            range_check(c.oracle_ntheta >= 16, lineno, key, "oracle_ntheta >= 16");
        } else if (key == "oracle_tol") {
            c.oracle_tol = parse_double(val, lineno, key);
            range_check(c.oracle_tol > 0.0, lineno, key, "oracle_tol > 0");
        } else if (key == "radial_n") {
            c.radial_n = parse_uint(val, lineno, key);
            range_check(c.radial_n >= 9, lineno, key, "radial_n >= 9");
        } else if (key == "r_max") {
            c.r_max = parse_double(val, lineno, key);
            range_check(c.r_max > 0.0, lineno, key, "r_max > 0");
        } else if (key == "lift_c0") {
            c.lift_c0 = parse_double(val, lineno, key);
            range_check(c.lift_c0 > 0.0, lineno, key, "lift_c0 > 0");
        } else if (key == "roundtrip_tol") {
            c.roundtrip_tol = parse_double(val, lineno, key);
            range_check(c.roundtrip_tol > 0.0, lineno, key, "roundtrip_tol > 0");
        } else if (key == "norm_specs") {
            c.norm_specs = val;
            parse_norm_specs(val);
        } else if (key == "rng_seed") {
            c.rng_seed = parse_uint(val, lineno, key);
        } else {
            throw detail::ConfigError("line " + std::to_string(lineno) + ": unknown key '"
                                      + key + "'");
        }
    }

    if (c.fit_xi_lo >= c.fit_xi_hi)
        throw detail::ConfigError("fit window empty: fit_xi_lo must be below fit_xi_hi");
    if (c.dt_initial > c.dt_max)
        throw detail::ConfigError("dt_initial must not exceed dt_max");
    if (c.initial_datum == "tabulated" && c.tabulated_path.empty())
        throw detail::ConfigError("initial_datum = tabulated requires tabulated_path");
    return c;
}

// ── Effective-config echo ─────────────────────────────────────────────────────

namespace detail {
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}
}  // namespace detail

inline std::string emit_config(const RunConfig &c) {
    using detail::fmt17;
    std::string o;
    auto kv = [&o](const std::string &k, const std::string &v) { o += k + " = " + v + "\n"; };
    kv("s", fmt17(c.s));
    kv("b0", fmt17(c.b0));
    kv("theta_cut", fmt17(c.theta_cut));
    kv("angle_map", c.angle_map);
    kv("quad_scheme", c.quad_scheme);
    kv("quad_nodes", std::to_string(c.quad_nodes));
    kv("grid_n", std::to_string(c.grid_n));
    kv("xi_max", fmt17(c.xi_max));
    kv("t_end", fmt17(c.t_end));
    kv("dt_initial", fmt17(c.dt_initial));
    kv("dt_max", fmt17(c.dt_max));
    kv("abs_tol", fmt17(c.abs_tol));
    kv("rel_tol", fmt17(c.rel_tol));
    kv("output_every", fmt17(c.output_every));
    kv("mass_drift_tol", fmt17(c.mass_drift_tol));
    kv("energy_drift_tol", fmt17(c.energy_drift_tol));
    kv("initial_datum", c.initial_datum);
    kv("tabulated_path", c.tabulated_path);
    kv("tabulated_format", c.tabulated_format);
    kv("ball_radius", fmt17(c.ball_radius));
    kv("ball_density", fmt17(c.ball_density));
    kv("exp_c0", fmt17(c.exp_c0));
    kv("exp_alpha", fmt17(c.exp_alpha));
    kv("exp_delta", fmt17(c.exp_delta));
    kv("poly_N", fmt17(c.poly_N));
    kv("poly_T0", fmt17(c.poly_T0));
    kv("poly_delta", fmt17(c.poly_delta));
    kv("fit_alpha", fmt17(c.fit_alpha));
    kv("fit_xi_lo", fmt17(c.fit_xi_lo));
    kv("fit_xi_hi", fmt17(c.fit_xi_hi));
    kv("fit_floor", fmt17(c.fit_floor));
    kv("trajectory_path", c.trajectory_path);
    kv("comm_deltas", c.comm_deltas);
    kv("comm_t", fmt17(c.comm_t));
    kv("coercivity_probes", c.coercivity_probes);
    kv("oracle_nv", std::to_string(c.oracle_nv));
    kv("oracle_vmax", fmt17(c.oracle_vmax));
    kv("oracle_ntheta", std::to_string(c.oracle_ntheta));
    kv("oracle_tol", fmt17(c.oracle_tol));
    kv("radial_n", std::to_string(c.radial_n));
    kv("r_max", fmt17(c.r_max));
    kv("lift_c0", fmt17(c.lift_c0));
    kv("roundtrip_tol", fmt17(c.roundtrip_tol));
    kv("norm_specs", c.norm_specs);
    kv("rng_seed", std::to_string(c.rng_seed));
    return o;
}

}  // namespace kacspec
