#pragma once

/*
 * diagnostics.hpp - the quantitative machinery verified on trajectories:
 * smoothing-exponent fits, commutator-residual ratios, coercivity estimates,
 * and the a-priori Osgood-type bound for the mollified norm.
 */

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "collision.hpp"
#include "grid.hpp"
#include "mollifier.hpp"
#include "norms.hpp"
#include "quadrature.hpp"

namespace kacspec {

// ── Small least-squares helpers ───────────────────────────────────────────────

namespace detail {

// y ≈ c x + d in the least-squares sense; returns {c, d, rms residual}.
struct LineFit {
    double slope = 0.0, intercept = 0.0, rms = 0.0;
};

inline LineFit fit_line(const std::vector<double> &x, const std::vector<double> &y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - f.slope * x[i] - f.intercept;
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

// y ≈ a₂ x² + a₁ x + a₀ by normal equations.
struct QuadFit {
    double a2 = 0.0, a1 = 0.0, a0 = 0.0;
};

inline QuadFit fit_quadratic(const std::vector<double> &x, const std::vector<double> &y) {
    double m[3][4] = {{0}};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double p[3] = {x[i] * x[i], x[i], 1.0};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += p[r] * p[c];
            m[r][3] += p[r] * y[i];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        for (int c = 0; c < 4; ++c) std::swap(m[col][c], m[piv][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = 0; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

}  // namespace detail

// ── smoothing_exponent_fit ────────────────────────────────────────────────────
/*
 * Fits log|f̂₀(ξ)| - log|f̂_t(ξ)| ≈ c ⟨ξ⟩^α + d over the window
 * [xi_lo, xi_hi].  A positive fitted c witnesses the induced e^{-c⟨ξ⟩^α}
 * decay envelope; c growing linearly in t witnesses the analytic-rate
 * smoothing.  Samples with |f̂| at or below the floor carry no exponent
 * information and are dropped; if fewer than 8 usable nodes remain the fit
 * is refused rather than degraded.
 */
struct SmoothingFit {
    double c = 0.0;
    double residual = 0.0;   // rms of the log-linear fit
    std::size_t n_points = 0;
};

inline SmoothingFit smoothing_exponent_fit(const SpectralState &f0, const SpectralState &ft,
                                           double alpha, double xi_lo = 5.0,
                                           double xi_hi = 25.0, double floor = 1e-14) {
    if (!(f0.grid == ft.grid))
        throw std::invalid_argument("smoothing_exponent_fit: states must share a grid");
    if (!(alpha > 0.0) || !(xi_lo < xi_hi))
        throw std::invalid_argument("smoothing_exponent_fit: need alpha > 0 and xi_lo < xi_hi");
    std::vector<double> x, y;
    for (std::size_t j = 0; j < f0.grid.n; ++j) {
        const double xi = f0.grid.node(j);
        if (xi < xi_lo || xi > xi_hi) continue;
        if (std::abs(f0.values[j]) <= floor || std::abs(ft.values[j]) <= floor) continue;
        x.push_back(std::pow(1.0 + xi * xi, 0.5 * alpha));
        y.push_back(std::log(std::abs(f0.values[j])) - std::log(std::abs(ft.values[j])));
    }
    if (x.size() < 8)
        throw std::domain_error(
            "smoothing_exponent_fit: fewer than 8 usable nodes in the fit window "
            "(state decayed below the floor; shrink the window)");
    const detail::LineFit lf = detail::fit_line(x, y);
    return {lf.slope, lf.rms, x.size()};
}

// ── commutator_residual ───────────────────────────────────────────────────────
/*
 * Measures how far a mollifier W is from commuting with the collision
 * operator, normalized by the factor lists of the corresponding continuous
 * estimates.  The defect D = W K(f, g) - K(f, W g) is paired with a probe of
 * matching parity (even for l = 0 and l = 2, odd via the first spectral
 * derivative for l = 1; g = f throughout) and the ratio
 *
 *     |⟨D, probe⟩| / (product of estimate factors)
 *
 * is returned per delta.  Valid combinations: the exponential family with
 * l ∈ {0, 1} and the polynomial family with l ∈ {0, 2}; the remaining
 * pairings have no matching estimate and are rejected.
 */
enum class MollifierFamily { exponential, polynomial };

struct CommutatorRow {
    double delta = 0.0;
    double lhs = 0.0;     // |⟨defect, probe⟩|
    double factor = 0.0;  // product of estimate factors
    double ratio = 0.0;
};

inline CommutatorRow commutator_residual(const SpectralState &f, MollifierFamily family,
                                         int l, double t, double delta,
                                         const AngularQuadrature &quad,
                                         const CrossSectionParams &cross,
                                         const ExpMollifierParams &exp_base = {},
                                         const PolyMollifierParams &poly_base = {}) {
    if (family == MollifierFamily::exponential && l != 0 && l != 1)
        throw std::domain_error(
            "commutator_residual: the exponential family pairs with l = 0 or 1 only");
    if (family == MollifierFamily::polynomial && l != 0 && l != 2)
        throw std::domain_error(
            "commutator_residual: the polynomial family pairs with l = 0 or 2 only");

    const FourierGrid &grid = f.grid;
    const double h = grid.spacing();
    const std::size_t n = grid.n;

    // mollifier samples at time t
    std::vector<double> W(n);
    ExpMollifierParams ep = exp_base;
    PolyMollifierParams pp = poly_base;
    if (family == MollifierFamily::exponential) {
        ep.delta = delta;
        ep.validate();
        for (std::size_t j = 0; j < n; ++j) W[j] = g_delta(t, grid.node(j), ep);
    } else {
        pp.delta = delta;
        pp.validate();
        for (std::size_t j = 0; j < n; ++j) W[j] = m_delta(t, grid.node(j), pp);
    }

    const std::vector<double> Kff = collision_rhs_samples(grid, f.values, f.values, quad, cross);
    std::vector<double> Wf(n), WK(n);
    for (std::size_t j = 0; j < n; ++j) {
        Wf[j] = W[j] * f.values[j];
        WK[j] = W[j] * Kff[j];
    }

    auto pair_even = [&](const std::vector<double> &a, const std::vector<double> &b) {
        std::vector<double> prod(n);
        for (std::size_t j = 0; j < n; ++j) prod[j] = a[j] * b[j];
        return half_line_integral(prod, h);
    };
    auto wnorm = [&](const std::vector<double> &x, double k, int ll) {
        return weighted_norm_samples(grid, x, k, ll);
    };

    const ConservedQuantities cq = conserved_quantities(f);
    const double l12 = cq.mass + cq.energy;

    CommutatorRow row;
    row.delta = delta;

    if (family == MollifierFamily::exponential && l == 0) {
        const std::vector<double> KWf = collision_rhs_samples(grid, f.values, Wf, quad, cross);
        std::vector<double> D(n);
        for (std::size_t j = 0; j < n; ++j) D[j] = WK[j] - KWf[j];
        row.lhs = std::abs(pair_even(D, f.values));
        row.factor = wnorm(Wf, 0.0, 1) * wnorm(Wf, 0.5, 0) * wnorm(f.values, 0.5, 0);
    } else if (family == MollifierFamily::exponential && l == 1) {
        // odd sector: defect of the first spectral derivative
        const std::vector<double> dWf = fd1_even(Wf, h);
        const std::vector<double> KdWf = collision_rhs_odd_g(grid, f.values, dWf, quad, cross);
        const std::vector<double> dWK = fd1_even(WK, h);
        std::vector<double> D(n), probe = fd1_even(f.values, h);
        for (std::size_t j = 0; j < n; ++j) D[j] = dWK[j] - KdWf[j];
        row.lhs = std::abs(pair_even(D, probe));
        std::vector<double> halfbr(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double xi = grid.node(j);
            halfbr[j] = std::sqrt(std::sqrt(1.0 + xi * xi)) * probe[j];
        }
        const double probe_h12 = std::sqrt(pair_even(halfbr, halfbr));
        row.factor = (l12 + wnorm(Wf, 0.0, 1)) * wnorm(Wf, 0.5, 1) * probe_h12;
    } else if (family == MollifierFamily::polynomial && l == 0) {
        const std::vector<double> KWf = collision_rhs_samples(grid, f.values, Wf, quad, cross);
        std::vector<double> D(n);
        for (std::size_t j = 0; j < n; ++j) D[j] = WK[j] - KWf[j];
        row.lhs = std::abs(pair_even(D, f.values));
        row.factor = cq.mass * wnorm(Wf, 0.0, 0) * wnorm(f.values, 0.0, 0);
    } else {
        // polynomial, l = 2: second-derivative sector, even again
        std::vector<double> d2Wf = fd2_even(Wf, h), d2WK = fd2_even(WK, h);
        for (std::size_t j = 0; j < n; ++j) { d2Wf[j] = -d2Wf[j]; d2WK[j] = -d2WK[j]; }
        const std::vector<double> Kd2 = collision_rhs_samples(grid, f.values, d2Wf, quad, cross);
        std::vector<double> D(n);
        for (std::size_t j = 0; j < n; ++j) D[j] = d2WK[j] - Kd2[j];
        row.lhs = std::abs(pair_even(D, f.values));
        row.factor = l12 * wnorm(Wf, 0.5, 2) * wnorm(f.values, 0.5, 0);
    }

    if (!(row.factor > 0.0))
        throw std::domain_error("commutator_residual: estimate factors vanish for this state");
    row.ratio = row.lhs / row.factor;
    return row;
}

// ── coercivity_ratio ──────────────────────────────────────────────────────────
/*
 * Lower-bound witness for the coercive part of the collision form:
 *
 *   estimate = ( -(K(f,g), g) + C ||f||_{L¹} ||g||²_{L²} ) / ||g||²_{H^s}
 *
 * with C the quadrature loss mass Σ w β.  For g = f at equilibrium the
 * collision term vanishes and the numerator reduces to the correction alone.
 * Estimates decrease toward the coercivity constant as the probe's spectral
 * mass moves outward (the correction term decays like ⟨ξ₀⟩^{-2s}); the
 * L²-normalized numerator is what grows like ⟨ξ₀⟩^{2s}.
 */
struct CoercivityResult {
    double estimate = 0.0;
    double correction = 0.0;  // C ||f||_{L¹} ||g||²_{L²}
};

inline CoercivityResult coercivity_ratio(const SpectralState &f, const SpectralState &g,
                                         const AngularQuadrature &quad,
                                         const CrossSectionParams &cross) {
    if (!(f.grid == g.grid))
        throw std::invalid_argument("coercivity_ratio: f and g must share a grid");
    const double h = f.grid.spacing();
    const std::size_t n = f.grid.n;

    const std::vector<double> Kfg = collision_rhs_samples(f.grid, f.values, g.values, quad, cross);
    std::vector<double> kg(n), gg(n), hs(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double xi = f.grid.node(j);
        kg[j] = Kfg[j] * g.values[j];
        gg[j] = g.values[j] * g.values[j];
        hs[j] = std::pow(1.0 + xi * xi, cross.s) * gg[j];
    }
    const double g_l2sq = half_line_integral(gg, h);
    const double den = half_line_integral(hs, h);
    if (!(den > 0.0))
        throw std::domain_error("coercivity_ratio: probe g must be nonzero");

    CoercivityResult r;
    r.correction = loss_mass(cross, quad) * f.values[0] * g_l2sq;
    r.estimate = (-half_line_integral(kg, h) + r.correction) / den;
    return r;
}

// ── psi bound ─────────────────────────────────────────────────────────────────
/*
 * The scalar a-priori bound: ψ' ≤ C₁ ψ + C₂ ψ^γ with γ > 2 gives
 *
 *   ψ(t) ≤ e^{C₁ t} ψ₀ / ( 1 - (C₂/C₁)(e^{(γ-1)C₁ t} - 1) ψ₀^{γ-1} )^{1/(γ-1)}
 *
 * up to the blow-up time
 *
 *   T* = log( 1 + (C₁/C₂) ψ₀^{1-γ} ) / ((γ-1) C₁),
 *
 * with the C₂ = 0 limit T* = ∞ (pure exponential bound) and the C₁ = 0
 * limit T* = ψ₀^{1-γ} / ((γ-1) C₂).
 */
struct PsiBoundParams {
    double gamma = 4.0;  // superlinear exponent, > 2
    double C1 = 0.0;     // linear rate, >= 0
    double C2 = 0.0;     // superlinear rate, >= 0
    double psi0 = 1.0;   // initial value, > 0

    void validate() const {
        if (!(gamma > 2.0))
            throw std::invalid_argument("PsiBoundParams: gamma must exceed 2");
        if (C1 < 0.0 || C2 < 0.0)
            throw std::invalid_argument("PsiBoundParams: rates must be nonnegative");
        if (!(psi0 > 0.0))
            throw std::invalid_argument("PsiBoundParams: psi0 must be positive");
    }
};

inline double psi_blowup_time(const PsiBoundParams &p) {
    p.validate();
    if (p.C2 == 0.0) return std::numeric_limits<double>::infinity();
    const double w = std::pow(p.psi0, 1.0 - p.gamma);
    if (p.C1 == 0.0) return w / ((p.gamma - 1.0) * p.C2);
    return std::log1p((p.C1 / p.C2) * w) / ((p.gamma - 1.0) * p.C1);
}

inline double psi_bound_value(const PsiBoundParams &p, double t) {
    p.validate();
    if (t < 0.0) throw std::domain_error("psi_bound_value: t must be nonnegative");
    if (t >= psi_blowup_time(p))
        throw std::domain_error("psi_bound_value: t is at or beyond the blow-up time");
    const double gm1 = p.gamma - 1.0;
    const double pw = std::pow(p.psi0, gm1);
    if (p.C1 == 0.0)
        return p.psi0 * std::pow(1.0 - gm1 * p.C2 * pw * t, -1.0 / gm1);
    const double denom = 1.0 - (p.C2 / p.C1) * std::expm1(gm1 * p.C1 * t) * pw;
    return std::exp(p.C1 * t) * p.psi0 * std::pow(denom, -1.0 / gm1);
}

// One-sided rate fit: the smallest C₁ (with C₂ = 0) such that the discrete
// log-slopes never exceed it, floored away from zero.
inline double fit_one_sided_rate(const std::vector<double> &times,
                                 const std::vector<double> &psis) {
    if (times.size() != psis.size() || times.size() < 2)
        throw std::invalid_argument("fit_one_sided_rate: need at least two samples");
    double c1 = 1e-6;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double sl = (std::log(psis[i + 1]) - std::log(psis[i]))
                        / (times[i + 1] - times[i]);
        c1 = std::max(c1, sl);
    }
    return c1;
}

struct PsiBoundRow {
    double t = 0.0;
    double psi = 0.0;
    double bound = 0.0;   // NaN outside the bound's domain
    bool in_domain = true;
    bool ok = true;
};

struct PsiBoundReport {
    std::vector<PsiBoundRow> rows;
    double t_star = 0.0;
    bool all_ok = true;
};

// Reports (never aborts) whether ψ(t) stays below the closed-form bound on
// the bound's domain; samples past T* are flagged and excluded from the
// verdict.
inline PsiBoundReport psi_bound_check(const std::vector<double> &times,
                                      const std::vector<double> &psis,
                                      const PsiBoundParams &p, double rel_tol = 1e-9) {
    if (times.size() != psis.size())
        throw std::invalid_argument("psi_bound_check: times and psis must align");
    PsiBoundReport rep;
    rep.t_star = psi_blowup_time(p);
    for (std::size_t i = 0; i < times.size(); ++i) {
        PsiBoundRow row;
        row.t = times[i];
        row.psi = psis[i];
        row.in_domain = times[i] < rep.t_star;
        if (row.in_domain) {
            row.bound = psi_bound_value(p, times[i]);
            row.ok = psis[i] <= row.bound * (1.0 + rel_tol);
            rep.all_ok = rep.all_ok && row.ok;
        } else {
            row.bound = std::numeric_limits<double>::quiet_NaN();
            row.ok = true;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace kacspec
