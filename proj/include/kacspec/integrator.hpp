#pragma once

/*
 * integrator.hpp - adaptive RK4 time stepping with step-doubling error
 * control.
 *
 * One macro step of size dt is compared against two half steps; the
 * componentwise discrepancy scaled by abs_tol + rel_tol * |f̂| must stay at
 * or below 1.  Accepted steps keep the (more accurate) two-half-step result.
 * Step sizes follow the usual fifth-root shrink/grow rule with a [0.2, 5]
 * clamp and a dt_max lid.
 *
 * Conservation is a hard contract, not a diagnostic: the collision bracket
 * vanishes at ξ = 0 identically, so mass can only drift through integrator
 * failure.  A relative mass drift beyond mass_drift_tol, an energy drift
 * beyond energy_drift_tol, or any non-finite sample aborts the run with a
 * stiffness diagnostic.
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "collision.hpp"
#include "grid.hpp"
#include "norms.hpp"

namespace kacspec {

// ── Configuration ─────────────────────────────────────────────────────────────
struct IntegratorConfig {
    double t_end = 0.5;
    double dt_initial = 1e-3;
    double dt_max = 0.05;
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    double output_every = 0.1;       // snapshot cadence
    double mass_drift_tol = 1e-6;    // relative, abort threshold
    double energy_drift_tol = 1e-3;  // relative, abort threshold

    void validate() const {
        if (!(t_end > 0.0)) throw std::invalid_argument("IntegratorConfig: t_end must be positive");
        if (!(dt_initial > 0.0) || !(dt_max > 0.0) || dt_initial > dt_max)
            throw std::invalid_argument("IntegratorConfig: need 0 < dt_initial <= dt_max");
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
        if (!(output_every > 0.0))
            throw std::invalid_argument("IntegratorConfig: output_every must be positive");
        if (!(mass_drift_tol > 0.0) || !(energy_drift_tol > 0.0))
            throw std::invalid_argument("IntegratorConfig: drift tolerances must be positive");
    }
};

// ── Diagnostics ───────────────────────────────────────────────────────────────
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double mass_drift = 0.0;    // relative to the initial mass
    double energy_drift = 0.0;  // relative to the initial energy
    double sup_ratio = 0.0;     // max_j |f̂_j| / f̂(0)
    std::vector<double> norms;  // one entry per requested WeightedNormSpec
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralState> states;
    std::vector<DiagnosticsRecord> records;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

// ── Stepping ──────────────────────────────────────────────────────────────────

namespace detail {

inline std::vector<double> rk4(const FourierGrid &grid, const std::vector<double> &y,
                               double dt, const AngularQuadrature &quad,
                               const CrossSectionParams &cross) {
    const std::size_t n = y.size();
    const std::vector<double> k1 = collision_rhs_samples(grid, y, y, quad, cross);
    std::vector<double> tmp(n);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + 0.5 * dt * k1[j];
    const std::vector<double> k2 = collision_rhs_samples(grid, tmp, tmp, quad, cross);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + 0.5 * dt * k2[j];
    const std::vector<double> k3 = collision_rhs_samples(grid, tmp, tmp, quad, cross);
    for (std::size_t j = 0; j < n; ++j) tmp[j] = y[j] + dt * k3[j];
    const std::vector<double> k4 = collision_rhs_samples(grid, tmp, tmp, quad, cross);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = y[j] + (dt / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    return out;
}

inline void check_finite(const std::vector<double> &y, double t) {
    for (double v : y)
        if (!std::isfinite(v))
            throw std::runtime_error(
                "evolve: non-finite state at t = " + std::to_string(t)
                + "; the problem is stiffer than the step controller can handle "
                  "(reduce dt_max or refine the angular quadrature)");
}

}  // namespace detail

// Single classical RK4 step.
inline SpectralState step(const SpectralState &f, double dt,
                          const AngularQuadrature &quad, const CrossSectionParams &cross) {
    if (!(dt > 0.0))
        throw std::invalid_argument("step: dt must be positive");
    std::vector<double> y = detail::rk4(f.grid, f.values, dt, quad, cross);
    detail::check_finite(y, dt);
    return SpectralState(f.grid, std::move(y), f.kind);
}

inline DiagnosticsRecord make_record(const FourierGrid &grid, const std::vector<double> &y,
                                     double t, double mass0, double energy0,
                                     const std::vector<WeightedNormSpec> &norm_specs) {
    DiagnosticsRecord r;
    r.t = t;
    r.mass = y[0];
    r.energy = energy_fd5(y, grid.spacing());
    r.mass_drift = (r.mass - mass0) / mass0;
    r.energy_drift = (r.energy - energy0) / energy0;
    double sup = 0.0;
    for (double v : y) sup = std::max(sup, std::abs(v));
    r.sup_ratio = sup / y[0];
    for (const WeightedNormSpec &spec : norm_specs)
        r.norms.push_back(weighted_norm(SpectralState(grid, y, StateKind::test_function), spec));
    return r;
}

// ── evolve ────────────────────────────────────────────────────────────────────
inline Trajectory evolve(const SpectralState &initial, const AngularQuadrature &quad,
                         const CrossSectionParams &cross, const IntegratorConfig &cfg,
                         const std::vector<WeightedNormSpec> &norm_specs = {}) {
    cfg.validate();
    initial.validate();

    const FourierGrid &grid = initial.grid;
    std::vector<double> y = initial.values;
    const double mass0 = y[0];
    const double energy0 = energy_fd5(y, grid.spacing());

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(initial);
    traj.records.push_back(make_record(grid, y, 0.0, mass0, energy0, norm_specs));

    double t = 0.0;
    double dt = cfg.dt_initial;
    double next_out = cfg.output_every;

    while (t < cfg.t_end - 1e-12) {
        const double dtt = std::min({dt, next_out - t, cfg.dt_max});
        const std::vector<double> big = detail::rk4(grid, y, dtt, quad, cross);
        std::vector<double> half = detail::rk4(grid, y, 0.5 * dtt, quad, cross);
        half = detail::rk4(grid, half, 0.5 * dtt, quad, cross);
        detail::check_finite(big, t);
        detail::check_finite(half, t);

        double err = 0.0;
        for (std::size_t j = 0; j < y.size(); ++j) {
            const double scale = cfg.abs_tol
                               + cfg.rel_tol * std::max(std::abs(y[j]), std::abs(half[j]));
            err = std::max(err, std::abs(big[j] - half[j]) / scale);
        }

        if (err <= 1.0) {
            y = half;
            t += dtt;
            ++traj.accepted;
            if (std::abs((y[0] - mass0) / mass0) > cfg.mass_drift_tol)
                throw std::runtime_error(
                    "evolve: relative mass drift exceeded " + std::to_string(cfg.mass_drift_tol)
                    + " at t = " + std::to_string(t)
                    + "; aborting (stiffness or resolution failure)");
            const double e = energy_fd5(y, grid.spacing());
            if (std::abs((e - energy0) / energy0) > cfg.energy_drift_tol)
                throw std::runtime_error(
                    "evolve: relative energy drift exceeded "
                    + std::to_string(cfg.energy_drift_tol) + " at t = " + std::to_string(t)
                    + "; aborting (stiffness or resolution failure)");
            if (std::abs(t - next_out) < 1e-12) {
                traj.times.push_back(t);
                traj.states.push_back(SpectralState(grid, y, StateKind::density));
                traj.records.push_back(make_record(grid, y, t, mass0, energy0, norm_specs));
                next_out += cfg.output_every;
            }
        } else {
            ++traj.rejected;
        }

        const double grow = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        dt = std::min(cfg.dt_max, dtt * std::min(5.0, std::max(0.2, grow)));
    }
    return traj;
}

}  // namespace kacspec
