#pragma once

/*
 * run.hpp - subcommand drivers behind the kacspec executable.
 *
 * Each driver reads a RunConfig, performs one verification workflow, writes
 * its artifacts (a CSV table plus a JSON summary, with floats carrying 17
 * significant digits) into an output directory, and returns a process exit
 * code: 0 when every enabled check passed, 1 when a quantitative check
 * failed.  Configuration and runtime errors escape as exceptions; the CLI
 * turns them into a JSON error block and exit code 2.  All runs also echo
 * the effective configuration, which reparses to an equal RunConfig.
 */

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "collision.hpp"
#include "config.hpp"
#include "diagnostics.hpp"
#include "grid.hpp"
#include "integrator.hpp"
#include "interp.hpp"
#include "norms.hpp"
#include "quadrature.hpp"
#include "radial3d.hpp"
#include "velocity_oracle.hpp"

namespace kacspec {

// ── File and text helpers ─────────────────────────────────────────────────────

namespace detail {

inline void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_file: cannot open '" + path + "' for writing");
    out << text;
    if (!out)
        throw std::runtime_error("write_file: short write to '" + path + "'");
}

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_file: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

inline std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

// JSON value text for a double; non-finite values become quoted strings so the
// output stays parseable.
inline std::string json_number(double x) {
    if (std::isnan(x)) return "\"nan\"";
    if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
    return fmt17(x);
}

inline std::string json_escape(const std::string &s) {
    std::string o;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') o += '\\';
        o += ch;
    }
    return o;
}

// Insertion-ordered JSON object rendered with one key per line.
class JsonObject {
public:
    void number(const std::string &k, double v) { item(k, json_number(v)); }
    void integer(const std::string &k, std::uint64_t v) { item(k, std::to_string(v)); }
    void boolean(const std::string &k, bool v) { item(k, v ? "true" : "false"); }
    void string(const std::string &k, const std::string &v) {
        item(k, "\"" + json_escape(v) + "\"");
    }
    void array(const std::string &k, const std::vector<double> &v) {
        std::string a = "[";
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j) a += ", ";
            a += json_number(v[j]);
        }
        item(k, a + "]");
    }
    void object(const std::string &k, const JsonObject &v) { item(k, v.inline_str()); }

    std::string inline_str() const {
        std::string o = "{";
        for (std::size_t j = 0; j < items_.size(); ++j) {
            if (j) o += ", ";
            o += items_[j];
        }
        return o + "}";
    }
    std::string str() const {
        std::string o = "{\n";
        for (std::size_t j = 0; j < items_.size(); ++j)
            o += "  " + items_[j] + (j + 1 < items_.size() ? ",\n" : "\n");
        return o + "}\n";
    }

private:
    void item(const std::string &k, const std::string &val) {
        items_.push_back("\"" + json_escape(k) + "\": " + val);
    }
    std::vector<std::string> items_;
};

class CsvTable {
public:
    explicit CsvTable(const std::string &header) : buf_(header + "\n") {}
    void row(const std::vector<std::string> &cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j) buf_ += ',';
            buf_ += cells[j];
        }
        buf_ += '\n';
    }
    void row(std::initializer_list<double> vals) {
        std::vector<std::string> cells;
        for (double v : vals) cells.push_back(fmt17(v));
        row(cells);
    }
    const std::string &str() const { return buf_; }

private:
    std::string buf_;
};

inline std::string join_path(const std::string &dir, const std::string &name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

}  // namespace detail

// ── Trajectory CSV round trip ─────────────────────────────────────────────────

inline std::string trajectory_csv(const Trajectory &traj) {
    detail::CsvTable csv("t,xi,f_hat");
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const SpectralState &st = traj.states[i];
        for (std::size_t j = 0; j < st.grid.n; ++j)
            csv.row({traj.times[i], st.grid.node(j), st.values[j]});
    }
    return csv.str();
}

// Reads a (t, xi, f_hat) table back into snapshots.  Rows must be grouped by
// time with every block listing the same uniform frequency grid from 0.
inline std::pair<std::vector<double>, std::vector<SpectralState>>
parse_trajectory_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != "t,xi,f_hat")
        throw std::invalid_argument("parse_trajectory_csv: expected header 't,xi,f_hat'");

    std::vector<double> times;
    std::vector<std::vector<double>> xis, vals;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::vector<std::string> cells = detail::split(line, ',');
        if (cells.size() != 3)
            throw std::invalid_argument("parse_trajectory_csv: expected 3 columns, got '"
                                        + line + "'");
        const double t = detail::parse_double(cells[0], 0, "trajectory t");
        const double xi = detail::parse_double(cells[1], 0, "trajectory xi");
        const double fh = detail::parse_double(cells[2], 0, "trajectory f_hat");
        if (times.empty() || t != times.back()) {
            times.push_back(t);
            xis.emplace_back();
            vals.emplace_back();
        }
        xis.back().push_back(xi);
        vals.back().push_back(fh);
    }
    if (times.empty())
        throw std::invalid_argument("parse_trajectory_csv: no data rows");

    const std::vector<double> &x0 = xis.front();
    if (x0.size() < 9 || x0.front() != 0.0)
        throw std::invalid_argument(
            "parse_trajectory_csv: each block needs >= 9 nodes starting at xi = 0");
    const FourierGrid grid(x0.size(), x0.back());
    const double tol = 1e-9 * grid.spacing();
    std::vector<SpectralState> states;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (xis[i].size() != grid.n)
            throw std::invalid_argument("parse_trajectory_csv: block "
                                        + std::to_string(i) + " has inconsistent node count");
        for (std::size_t j = 0; j < grid.n; ++j)
            if (std::abs(xis[i][j] - grid.node(j)) > tol)
                throw std::invalid_argument(
                    "parse_trajectory_csv: nodes are not a uniform grid from 0");
        states.emplace_back(grid, vals[i], StateKind::test_function);
    }
    return {times, states};
}

// ── Initial data ──────────────────────────────────────────────────────────────

// Two-column numeric CSV; a non-numeric first line is treated as a header.
inline std::pair<std::vector<double>, std::vector<double>>
parse_two_column_csv(const std::string &text, const std::string &who) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> a, b;
    bool first = true;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::vector<std::string> cells = detail::split(line, ',');
        if (cells.size() != 2)
            throw std::invalid_argument(who + ": expected 2 columns, got '" + line + "'");
        if (first) {
            first = false;
            char *end = nullptr;
            std::strtod(cells[0].c_str(), &end);
            if (end == cells[0].c_str()) continue;  // header line
        }
        a.push_back(detail::parse_double(cells[0], 0, who));
        b.push_back(detail::parse_double(cells[1], 0, who));
    }
    if (a.size() < 9)
        throw std::invalid_argument(who + ": need at least 9 data rows");
    return {a, b};
}

inline SpectralState tabulated_state_from_xi(const std::vector<double> &xi,
                                             const std::vector<double> &fh,
                                             const FourierGrid &target) {
    if (xi.front() != 0.0)
        throw std::invalid_argument("tabulated data: first frequency node must be 0");
    const FourierGrid src(xi.size(), xi.back());
    const double tol = 1e-9 * src.spacing();
    for (std::size_t j = 0; j < src.n; ++j)
        if (std::abs(xi[j] - src.node(j)) > tol)
            throw std::invalid_argument("tabulated data: frequency nodes must be uniform");
    if (src.xi_max < target.xi_max - 1e-12)
        throw std::invalid_argument("tabulated data: table ends before the target grid");
    const CubicSpline sp(src, fh);
    std::vector<double> out(target.n);
    for (std::size_t j = 0; j < target.n; ++j)
        out[j] = sp.eval(std::min(target.node(j), src.xi_max));
    return SpectralState(target, std::move(out));
}

inline SpectralState tabulated_state_from_v(const std::vector<double> &v,
                                            const std::vector<double> &f,
                                            const FourierGrid &target) {
    const std::size_t n = v.size();
    if (std::abs(v.front() + v.back()) > 1e-9)
        throw std::invalid_argument("tabulated data: velocity grid must be symmetric");
    const VelocityGrid vg(n, v.back());
    const double tol = 1e-9 * vg.spacing();
    for (std::size_t j = 0; j < n; ++j)
        if (std::abs(v[j] - vg.node(j)) > tol)
            throw std::invalid_argument("tabulated data: velocity nodes must be uniform");
    const std::vector<double> fh = cosine_transform(vg, f, target);
    return SpectralState(target, fh);
}

inline SpectralState build_initial_state(const RunConfig &cfg) {
    const FourierGrid grid(cfg.grid_n, cfg.xi_max);
    if (cfg.initial_datum == "gaussian") return gaussian_state(grid);
    if (cfg.initial_datum == "laplace") return laplace_state(grid);
    if (cfg.initial_datum == "uniform_ball_3d")
        return uniform_ball_state(grid, cfg.ball_radius, cfg.ball_density);
    if (cfg.initial_datum == "tabulated") {
        const auto cols = parse_two_column_csv(detail::read_file(cfg.tabulated_path),
                                               "tabulated data");
        return cfg.tabulated_format == "v_f"
                   ? tabulated_state_from_v(cols.first, cols.second, grid)
                   : tabulated_state_from_xi(cols.first, cols.second, grid);
    }
    throw std::invalid_argument("build_initial_state: unknown initial_datum '"
                                + cfg.initial_datum + "'");
}

// Velocity-space samples matching the spectral datum, for the oracle check.
inline std::vector<double> velocity_samples_for(const RunConfig &cfg, const VelocityGrid &vg) {
    std::vector<double> f(vg.n);
    if (cfg.initial_datum == "gaussian") {
        const double c = 1.0 / std::sqrt(2.0 * 3.14159265358979323846);
        for (std::size_t j = 0; j < vg.n; ++j) {
            const double v = vg.node(j);
            f[j] = c * std::exp(-0.5 * v * v);
        }
    } else if (cfg.initial_datum == "laplace") {
        for (std::size_t j = 0; j < vg.n; ++j)
            f[j] = 0.5 * std::exp(-std::abs(vg.node(j)));
    } else if (cfg.initial_datum == "uniform_ball_3d") {
        const double R = cfg.ball_radius, rho = cfg.ball_density;
        for (std::size_t j = 0; j < vg.n; ++j) {
            const double v = vg.node(j);
            f[j] = 3.14159265358979323846 * rho * std::max(R * R - v * v, 0.0);
        }
    } else if (cfg.initial_datum == "tabulated" && cfg.tabulated_format == "v_f") {
        const auto cols = parse_two_column_csv(detail::read_file(cfg.tabulated_path),
                                               "tabulated data");
        const std::vector<double> &v = cols.first;
        if (v.size() != vg.n || std::abs(v.back() - vg.v_max) > 1e-9)
            throw std::invalid_argument(
                "velocity_samples_for: tabulated grid must match oracle_nv and oracle_vmax");
        f = cols.second;
    } else {
        throw std::invalid_argument(
            "velocity_samples_for: no velocity-space form for initial_datum '"
            + cfg.initial_datum + "'");
    }
    return f;
}

// ── Shared subcommand plumbing ────────────────────────────────────────────────

namespace detail {

inline std::vector<std::string> norm_spec_labels(const std::string &csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

inline void emit_run_artifacts(const RunConfig &cfg, const std::string &out_dir,
                               const std::string &csv_name, const std::string &csv_text,
                               const std::string &json_name, const JsonObject &summary) {
    write_file(join_path(out_dir, "effective_config.cfg"), emit_config(cfg));
    if (!csv_name.empty()) write_file(join_path(out_dir, csv_name), csv_text);
    write_file(join_path(out_dir, json_name), summary.str());
    std::fputs(summary.str().c_str(), stdout);
}

}  // namespace detail

// ── simulate ──────────────────────────────────────────────────────────────────

inline int run_simulate(const RunConfig &cfg, const std::string &out_dir) {
    const CrossSectionParams cross = cfg.cross_params();
    const AngularQuadrature quad = build_quadrature(cross, cfg.quad_nodes, cfg.scheme());
    const SpectralState initial = build_initial_state(cfg);
    const std::vector<WeightedNormSpec> specs = parse_norm_specs(cfg.norm_specs);

    const Trajectory traj = evolve(initial, quad, cross, cfg.integrator_config(), specs);

    double mass_drift = 0.0, energy_drift = 0.0, sup_ratio = 0.0;
    for (const DiagnosticsRecord &r : traj.records) {
        mass_drift = std::max(mass_drift, std::abs(r.mass_drift));
        energy_drift = std::max(energy_drift, std::abs(r.energy_drift));
        sup_ratio = std::max(sup_ratio, r.sup_ratio);
    }
    double max_change = 0.0;
    for (std::size_t j = 0; j < initial.grid.n; ++j)
        max_change = std::max(max_change,
                              std::abs(traj.states.back().values[j] - initial.values[j]));

    const bool pass = sup_ratio <= 1.0 + 1e-6;

    detail::JsonObject summary;
    summary.string("subcommand", "simulate");
    summary.integer("snapshots", traj.times.size());
    summary.integer("accepted_steps", traj.accepted);
    summary.integer("rejected_steps", traj.rejected);
    summary.number("final_time", traj.times.back());
    summary.number("mass_drift_max", mass_drift);
    summary.number("energy_drift_max", energy_drift);
    summary.number("sup_ratio_max", sup_ratio);
    summary.number("max_change", max_change);
    detail::JsonObject norms;
    const std::vector<std::string> labels = detail::norm_spec_labels(cfg.norm_specs);
    for (std::size_t k = 0; k < specs.size(); ++k) {
        std::vector<double> series;
        for (const DiagnosticsRecord &r : traj.records) series.push_back(r.norms[k]);
        norms.array(labels[k], series);
    }
    summary.object("norms", norms);
    summary.boolean("pass", pass);

    detail::emit_run_artifacts(cfg, out_dir, "trajectory.csv", trajectory_csv(traj),
                               "simulate_summary.json", summary);
    return pass ? 0 : 1;
}

// ── fit-smoothing ─────────────────────────────────────────────────────────────

inline int run_fit_smoothing(const RunConfig &cfg, const std::string &out_dir) {
    std::vector<double> times;
    std::vector<SpectralState> states;
    if (!cfg.trajectory_path.empty()) {
        auto loaded = parse_trajectory_csv(detail::read_file(cfg.trajectory_path));
        times = std::move(loaded.first);
        states = std::move(loaded.second);
    } else {
        const CrossSectionParams cross = cfg.cross_params();
        const AngularQuadrature quad = build_quadrature(cross, cfg.quad_nodes, cfg.scheme());
        const Trajectory traj =
            evolve(build_initial_state(cfg), quad, cross, cfg.integrator_config());
        times = traj.times;
        states = traj.states;
    }
    if (times.size() < 2)
        throw std::invalid_argument("fit-smoothing: need at least two snapshots");

    detail::CsvTable csv("t,c_t,residual");
    bool pass = true;
    std::vector<double> cs;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const SmoothingFit fit =
            smoothing_exponent_fit(states.front(), states[i], cfg.fit_alpha, cfg.fit_xi_lo,
                                   cfg.fit_xi_hi, cfg.fit_floor);
        csv.row({times[i], fit.c, fit.residual});
        cs.push_back(fit.c);
        if (!(std::isfinite(fit.c) && fit.c > 0.0)) pass = false;
    }

    detail::JsonObject summary;
    summary.string("subcommand", "fit-smoothing");
    summary.number("alpha", cfg.fit_alpha);
    summary.number("window_lo", cfg.fit_xi_lo);
    summary.number("window_hi", cfg.fit_xi_hi);
    summary.integer("rows", cs.size());
    summary.array("c_t", cs);
    summary.boolean("pass", pass);

    detail::emit_run_artifacts(cfg, out_dir, "smoothing_fit.csv", csv.str(),
                               "fit_smoothing_summary.json", summary);
    return pass ? 0 : 1;
}

// ── check-commutators ─────────────────────────────────────────────────────────

inline int run_check_commutators(const RunConfig &cfg, const std::string &out_dir) {
    const CrossSectionParams cross = cfg.cross_params();
    const AngularQuadrature quad = build_quadrature(cross, cfg.quad_nodes, cfg.scheme());
    const SpectralState f = build_initial_state(cfg);
    const std::vector<double> deltas = parse_double_list(cfg.comm_deltas, "comm_deltas");

    struct Case {
        const char *id;
        MollifierFamily family;
        int l;
    };
    const Case cases[] = {{"exp_l0", MollifierFamily::exponential, 0},
                          {"exp_l1", MollifierFamily::exponential, 1},
                          {"poly_l0", MollifierFamily::polynomial, 0},
                          {"poly_l2", MollifierFamily::polynomial, 2}};

    detail::CsvTable csv("case,delta,lhs,factor,ratio");
    detail::JsonObject spreads;
    bool pass = true;
    for (const Case &cs : cases) {
        double rmin = std::numeric_limits<double>::infinity();
        double rmax = -rmin, amin = rmin;
        for (double d : deltas) {
            ExpMollifierParams ep = cfg.exp_params();
            ep.delta = d;
            PolyMollifierParams pp = cfg.poly_params();
            pp.delta = d;
            const CommutatorRow row =
                commutator_residual(f, cs.family, cs.l, cfg.comm_t, d, quad, cross, ep, pp);
            csv.row({cs.id, detail::fmt17(d), detail::fmt17(row.lhs),
                     detail::fmt17(row.factor), detail::fmt17(row.ratio)});
            if (!std::isfinite(row.ratio)) pass = false;
            rmin = std::min(rmin, row.ratio);
            rmax = std::max(rmax, row.ratio);
            amin = std::min(amin, std::abs(row.ratio));
        }
        detail::JsonObject one;
        one.number("ratio_min", rmin);
        one.number("ratio_max", rmax);
        one.number("spread", (rmax - rmin) / amin);
        spreads.object(cs.id, one);
    }

    detail::JsonObject summary;
    summary.string("subcommand", "check-commutators");
    summary.number("t", cfg.comm_t);
    summary.object("cases", spreads);
    summary.boolean("pass", pass);

    detail::emit_run_artifacts(cfg, out_dir, "commutator_table.csv", csv.str(),
                               "check_commutators_summary.json", summary);
    return pass ? 0 : 1;
}

// ── check-coercivity ──────────────────────────────────────────────────────────

inline int run_check_coercivity(const RunConfig &cfg, const std::string &out_dir) {
    const CrossSectionParams cross = cfg.cross_params();
    const AngularQuadrature quad = build_quadrature(cross, cfg.quad_nodes, cfg.scheme());
    const SpectralState f = build_initial_state(cfg);
    const std::vector<double> probes =
        parse_double_list(cfg.coercivity_probes, "coercivity_probes");

    detail::CsvTable csv("xi0,estimate,correction");
    std::vector<double> estimates;
    bool pass = true;
    for (double xi0 : probes) {
        std::vector<double> g(f.grid.n);
        for (std::size_t j = 0; j < f.grid.n; ++j) {
            const double xi = f.grid.node(j);
            g[j] = std::exp(-0.5 * (xi - xi0) * (xi - xi0))
                 + std::exp(-0.5 * (xi + xi0) * (xi + xi0));
        }
        const SpectralState gs(f.grid, g, StateKind::test_function);
        const CoercivityResult r = coercivity_ratio(f, gs, quad, cross);
        csv.row({xi0, r.estimate, r.correction});
        estimates.push_back(r.estimate);
        if (!(std::isfinite(r.estimate) && r.estimate > 0.0)) pass = false;
    }

    detail::JsonObject summary;
    summary.string("subcommand", "check-coercivity");
    summary.array("estimates", estimates);
    summary.boolean("pass", pass);

    detail::emit_run_artifacts(cfg, out_dir, "coercivity_table.csv", csv.str(),
                               "check_coercivity_summary.json", summary);
    return pass ? 0 : 1;
}

// ── oracle-compare ────────────────────────────────────────────────────────────

inline int run_oracle_compare(const RunConfig &cfg, const std::string &out_dir) {
    const CrossSectionParams cross = cfg.cross_params();
    const AngularQuadrature quad = build_quadrature(cross, cfg.quad_nodes, cfg.scheme());
    const SpectralState f = build_initial_state(cfg);
    const SpectralState spec = collision_rhs(f, f, quad, cross);

    const VelocityGrid vg(cfg.oracle_nv, cfg.oracle_vmax);
    const std::vector<double> fv = velocity_samples_for(cfg, vg);
    const AngularQuadrature oquad = build_quadrature(cross, cfg.oracle_ntheta, cfg.scheme());
    const std::vector<double> Kv = velocity_space_collision(vg, fv, fv, oquad, cross);
    const std::vector<double> Kv_hat = cosine_transform(vg, Kv, f.grid);

    detail::CsvTable csv("xi,spectral,velocity_oracle");
    double disc = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < f.grid.n; ++j) {
        csv.row({f.grid.node(j), spec.values[j], Kv_hat[j]});
        disc = std::max(disc, std::abs(spec.values[j] - Kv_hat[j]));
        scale = std::max(scale, std::abs(spec.values[j]));
    }
    const bool pass = disc <= cfg.oracle_tol;

    detail::JsonObject summary;
    summary.string("subcommand", "oracle-compare");
    summary.number("discrepancy", disc);
    summary.number("spectral_scale", scale);
    summary.number("tolerance", cfg.oracle_tol);
    summary.boolean("pass", pass);

    detail::emit_run_artifacts(cfg, out_dir, "oracle_compare.csv", csv.str(),
                               "oracle_compare_summary.json", summary);
    return pass ? 0 : 1;
}

// ── reduce-3d ─────────────────────────────────────────────────────────────────

inline int run_reduce_3d(const RunConfig &cfg, const std::string &out_dir) {
    RadialProfile3D prof;
    if (cfg.initial_datum == "gaussian") {
        prof = gaussian_profile(cfg.radial_n, cfg.r_max);
    } else if (cfg.initial_datum == "uniform_ball_3d") {
        if (cfg.ball_radius >= cfg.r_max)
            throw std::invalid_argument("reduce-3d: ball_radius must lie inside r_max");
        prof = ball_profile(cfg.radial_n, cfg.r_max, cfg.ball_radius, cfg.ball_density);
    } else {
        throw std::invalid_argument(
            "reduce-3d: initial_datum must be gaussian or uniform_ball_3d");
    }

    const ReducedMarginal marg(prof);
    detail::CsvTable csv("u,F");
    for (std::size_t j = 0; j < prof.n(); ++j)
        csv.row({prof.node(j), marg.node_values()[j]});

    const double m3 = mass_3d(prof);
    const double mm = mass_marginal(marg);
    const double e3 = second_moment_3d(prof);
    const double em = second_moment_marginal(marg);
    const double mass_err = std::abs(m3 - mm) / m3;
    // The 1D marginal carries one of the three coordinate directions, so its
    // second moment is a third of the radial one.
    const double energy_err = std::abs(e3 / 3.0 - em) / (e3 / 3.0);

    const FourierGrid fg(cfg.grid_n, cfg.xi_max);
    const std::vector<double> hat_m = marginal_transform(marg, fg);
    const std::vector<double> hat_3 = radial_transform_3d(prof, fg);
    double roundtrip = 0.0;
    for (std::size_t j = 0; j < fg.n; ++j)
        roundtrip = std::max(roundtrip, std::abs(hat_m[j] - hat_3[j]));

    const SpectralState hat_state(fg, hat_m);
    const double lifted = lifted_shell_integral(hat_state, cfg.lift_c0);

    const bool pass = mass_err <= 1e-8 && energy_err <= 1e-8 && roundtrip <= cfg.roundtrip_tol;

    detail::JsonObject summary;
    summary.string("subcommand", "reduce-3d");
    summary.number("mass_3d", m3);
    summary.number("mass_marginal", mm);
    summary.number("mass_rel_err", mass_err);
    summary.number("second_moment_3d_over_3", e3 / 3.0);
    summary.number("second_moment_marginal", em);
    summary.number("second_moment_rel_err", energy_err);
    summary.number("roundtrip_max_err", roundtrip);
    summary.number("lifted_shell_integral", lifted);
    summary.boolean("pass", pass);

    detail::emit_run_artifacts(cfg, out_dir, "marginal.csv", csv.str(),
                               "reduce_3d_summary.json", summary);
    return pass ? 0 : 1;
}

// ── psi-bound ─────────────────────────────────────────────────────────────────

inline int run_psi_bound(const RunConfig &cfg, const std::string &out_dir) {
    if (cfg.s <= 0.5)
        throw std::invalid_argument("psi-bound: needs s > 1/2 for a finite exponent");

    const CrossSectionParams cross = cfg.cross_params();
    const AngularQuadrature quad = build_quadrature(cross, cfg.quad_nodes, cfg.scheme());
    const Trajectory traj =
        evolve(build_initial_state(cfg), quad, cross, cfg.integrator_config());

    std::vector<double> psis;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        WeightedNormSpec spec;
        spec.k = 0.0;
        spec.l = 1;
        spec.weight = WeightKind::exp_mollifier;
        spec.exp_params = cfg.exp_params();
        spec.t = traj.times[i];
        psis.push_back(weighted_norm(traj.states[i], spec));
    }

    PsiBoundParams p;
    p.gamma = 2.0 + 1.0 / (2.0 * cfg.s - 1.0);
    p.C1 = fit_one_sided_rate(traj.times, psis);
    p.C2 = 0.0;
    p.psi0 = psis.front();
    const PsiBoundReport report = psi_bound_check(traj.times, psis, p);

    detail::CsvTable csv("t,psi,bound,within_bound");
    for (const PsiBoundRow &row : report.rows)
        csv.row({detail::fmt17(row.t), detail::fmt17(row.psi), detail::fmt17(row.bound),
                 row.ok ? "1" : "0"});

    detail::JsonObject summary;
    summary.string("subcommand", "psi-bound");
    summary.number("gamma", p.gamma);
    summary.number("C1", p.C1);
    summary.number("C2", p.C2);
    summary.number("psi0", p.psi0);
    summary.number("t_star", report.t_star);
    summary.array("psi", psis);
    summary.boolean("pass", report.all_ok);

    detail::emit_run_artifacts(cfg, out_dir, "psi_bound.csv", csv.str(),
                               "psi_bound_summary.json", summary);
    return report.all_ok ? 0 : 1;
}

// ── Dispatch ──────────────────────────────────────────────────────────────────

inline int run_subcommand(const std::string &name, const RunConfig &cfg,
                          const std::string &out_dir) {
    if (name == "simulate") return run_simulate(cfg, out_dir);
    if (name == "fit-smoothing") return run_fit_smoothing(cfg, out_dir);
    if (name == "check-commutators") return run_check_commutators(cfg, out_dir);
    if (name == "check-coercivity") return run_check_coercivity(cfg, out_dir);
    if (name == "oracle-compare") return run_oracle_compare(cfg, out_dir);
    if (name == "reduce-3d") return run_reduce_3d(cfg, out_dir);
    if (name == "psi-bound") return run_psi_bound(cfg, out_dir);
    throw std::invalid_argument("run_subcommand: unknown subcommand '" + name + "'");
}

}  // namespace kacspec
