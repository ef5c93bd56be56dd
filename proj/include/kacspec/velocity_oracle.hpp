#pragma once

/*
 * velocity_oracle.hpp - direct velocity-space evaluation of the collision
 * operator, used as an independent cross-check of the spectral engine.
 *
 * The bilinear operator in the pre/post-collision parametrization:
 *
 *   K(f,g)(v) = ∫ dθ β(θ) ∫ dv* { g(v cosθ - v* sinθ) f(v sinθ + v* cosθ)
 *                                  - g(v) f(v*) }
 *
 * The output variable rides on g (the rotated cos-slot), matching the
 * frequency-side bracket f̂(ξ sinθ) ĝ(ξ cosθ) - f̂(0) ĝ(ξ).  Discretization:
 * trapezoid in v*, the supplied angular quadrature in θ, linear interpolation
 * with zero extension off the grid.  Deliberately independent of every choice
 * made by the spectral path (no splines, no Maxwellian split).
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cross_section.hpp"
#include "grid.hpp"
#include "quadrature.hpp"

namespace kacspec {

// ── VelocityGrid ──────────────────────────────────────────────────────────────
struct VelocityGrid {
    std::size_t n = 0;     // node count, at least 16
    double v_max = 0.0;    // symmetric extent, nodes on [-v_max, v_max]

    VelocityGrid() = default;
    VelocityGrid(std::size_t n_, double v_max_) : n(n_), v_max(v_max_) {
        if (n < 16)
            throw std::invalid_argument("VelocityGrid: need at least 16 nodes");
        if (!(v_max > 0.0))
            throw std::invalid_argument("VelocityGrid: v_max must be positive");
    }

    double spacing() const { return 2.0 * v_max / static_cast<double>(n - 1); }
    double node(std::size_t j) const { return -v_max + static_cast<double>(j) * spacing(); }
};

namespace detail {

inline double lin_interp_zero_ext(const VelocityGrid &g, const std::vector<double> &f,
                                  double v) {
    const double pos = (v + g.v_max) / g.spacing();
    if (pos < 0.0 || pos > static_cast<double>(g.n - 1)) return 0.0;
    std::size_t j = static_cast<std::size_t>(pos);
    if (j >= g.n - 1) j = g.n - 2;
    const double t = pos - static_cast<double>(j);
    return f[j] * (1.0 - t) + f[j + 1] * t;
}

inline void check_velocity_samples(const VelocityGrid &g, const std::vector<double> &f,
                                   const char *who) {
    if (f.size() != g.n)
        throw std::invalid_argument(std::string(who) + ": sample count does not match grid");
    for (double v : f) {
        if (!std::isfinite(v))
            throw std::domain_error(std::string(who) + ": non-finite sample");
        if (v < 0.0)
            throw std::domain_error(std::string(who) + ": density samples must be nonnegative");
    }
    if (f.front() > 1e-12 || f.back() > 1e-12)
        throw std::domain_error(std::string(who)
                                + ": significant mass at the grid boundary; enlarge v_max");
}

}  // namespace detail

// ── velocity_space_collision ──────────────────────────────────────────────────
inline std::vector<double> velocity_space_collision(const VelocityGrid &vg,
                                                    const std::vector<double> &f,
                                                    const std::vector<double> &g,
                                                    const AngularQuadrature &quad,
                                                    const CrossSectionParams &cross) {
    cross.validate();
    detail::check_velocity_samples(vg, f, "velocity_space_collision");
    detail::check_velocity_samples(vg, g, "velocity_space_collision");

    const std::size_t n = vg.n;
    const double dv = vg.spacing();
    std::vector<double> tw(n, dv);
    tw.front() = tw.back() = 0.5 * dv;

    double f_total = 0.0;
    for (std::size_t j = 0; j < n; ++j) f_total += tw[j] * f[j];

    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
        const double th = quad.nodes[k];
        const double c = std::cos(th), s = std::sin(th);
        const double wb = quad.weights[k] * beta(th, cross);
        for (std::size_t i = 0; i < n; ++i) {
            const double vi = vg.node(i);
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double vj = vg.node(j);
                gain += tw[j]
                      * detail::lin_interp_zero_ext(vg, g, vi * c - vj * s)
                      * detail::lin_interp_zero_ext(vg, f, vi * s + vj * c);
            }
            out[i] += wb * (gain - g[i] * f_total);
        }
    }
    return out;
}

// ── cosine_transform ──────────────────────────────────────────────────────────
// f̂(ξ) = ∫ f(v) cos(v ξ) dv by trapezoid; the imaginary part vanishes for
// even data and is not formed.
inline std::vector<double> cosine_transform(const VelocityGrid &vg,
                                            const std::vector<double> &f,
                                            const FourierGrid &fg) {
    if (f.size() != vg.n)
        throw std::invalid_argument("cosine_transform: sample count does not match grid");
    const double dv = vg.spacing();
    std::vector<double> tw(vg.n, dv);
    tw.front() = tw.back() = 0.5 * dv;
    std::vector<double> out(fg.n, 0.0);
    for (std::size_t k = 0; k < fg.n; ++k) {
        const double xi = fg.node(k);
        double acc = 0.0;
        for (std::size_t j = 0; j < vg.n; ++j)
            acc += tw[j] * f[j] * std::cos(vg.node(j) * xi);
        out[k] = acc;
    }
    return out;
}

// ── entropy ───────────────────────────────────────────────────────────────────
// Trapezoid evaluation of ∫ f log f (restricted to f > floor, where the
// integrand is defined) and the everywhere-finite companion ∫ f log(1+f).
struct EntropyResult {
    double f_log_f = 0.0;
    double f_log_1p_f = 0.0;
};

inline EntropyResult entropy(const VelocityGrid &vg, const std::vector<double> &f,
                             double floor = 0.0) {
    if (f.size() != vg.n)
        throw std::invalid_argument("entropy: sample count does not match grid");
    const double dv = vg.spacing();
    std::vector<double> tw(vg.n, dv);
    tw.front() = tw.back() = 0.5 * dv;
    EntropyResult r;
    for (std::size_t j = 0; j < vg.n; ++j) {
        if (!(f[j] >= 0.0) || !std::isfinite(f[j]))
            throw std::domain_error("entropy: density samples must be finite and nonnegative");
        if (f[j] > floor) r.f_log_f += tw[j] * f[j] * std::log(f[j]);
        r.f_log_1p_f += tw[j] * f[j] * std::log1p(f[j]);
    }
    return r;
}

}  // namespace kacspec
