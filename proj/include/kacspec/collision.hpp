#pragma once

/*
 * collision.hpp - the frequency-space collision operator.
 *
 * The transform of the bilinear collision operator acts pointwise in ξ as a
 * single angular integral of a gain-loss bracket,
 *
 *   K̂(f,g)(ξ) = ∫ β(θ) { f̂(ξ a₋(θ)) ĝ(ξ a₊(θ)) - f̂(0) ĝ(ξ) } dθ,
 *
 * with (a₋, a₊) = (|sin θ|, |cos θ|) or the half-angle pair.  The bracket
 * vanishes to O(θ²) at grazing angles, which is the only reason the
 * integral exists: gain and loss are never formed separately, and no API
 * here exposes them separately.
 *
 * Both sides enter through the Maxwellian split f̂ = m e^{-T ξ²/2} + dev.
 * The product of the two Maxwellian parts minus its loss twin collapses, via
 * a₋² + a₊² = 1 applied analytically, to
 *
 *   MM(ξ,θ) = m_f m_g e^{-T_g ξ²/2} expm1( -(T_f - T_g)(ξ a₋)²/2 ),
 *
 * identically zero for equal temperatures.  The remaining bracket is
 *
 *   MM + M_f(ξa₋) dev_g(ξa₊) + dev_f(ξa₋) M_g(ξa₊) + dev_f(ξa₋) dev_g(ξa₊)
 *      - m_f dev_g(ξ) - dev_f(0) ĝ(ξ),
 *
 * exact in both the split regime (dev_f(0) = 0) and the fallback regime
 * (m_f = 0, dev_f = f̂), and exactly zero at ξ = 0 in every regime.
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cross_section.hpp"
#include "grid.hpp"
#include "interp.hpp"
#include "quadrature.hpp"

namespace kacspec {

namespace detail {

struct AngleTables {
    std::vector<double> a_minus, a_plus, wbeta;
};

inline AngleTables angle_tables(const CrossSectionParams &p, const AngularQuadrature &q) {
    AngleTables t;
    const std::size_t m = q.nodes.size();
    t.a_minus.resize(m);
    t.a_plus.resize(m);
    t.wbeta.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double th = q.nodes[k];
        const double arg = (p.angle_map == AngleMap::half_angle) ? 0.5 * th : th;
        t.a_minus[k] = std::abs(std::sin(arg));
        t.a_plus[k] = std::abs(std::cos(arg));
        t.wbeta[k] = q.weights[k] * beta(th, p);
    }
    return t;
}

}  // namespace detail

// ── collision_rhs ─────────────────────────────────────────────────────────────
// K̂(f, g) sampled on the grid of f.  Bilinear; the output is a test-function
// state (it is signed and vanishes at ξ = 0).
inline std::vector<double> collision_rhs_samples(const FourierGrid &grid,
                                                 const std::vector<double> &fv,
                                                 const std::vector<double> &gv,
                                                 const AngularQuadrature &quad,
                                                 const CrossSectionParams &cross) {
    cross.validate();
    const detail::AngleTables at = detail::angle_tables(cross, quad);
    const SplitInterp F(grid, fv), G(grid, gv);
    const double mf = F.mass(), mg = G.mass();
    const double Tf = F.temperature(), Tg = G.temperature();
    const double df0 = F.dev_at_zero();
    const std::size_t nq = at.wbeta.size();

    std::vector<double> out(grid.n, 0.0);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double xi = grid.node(j);
        const double mfg = mf * mg;
        const double bg = -0.5 * Tg * xi * xi;
        const double dg_xi = G.deviation(xi);
        const double g_xi = gv[j];
        double acc = 0.0;
        for (std::size_t k = 0; k < nq; ++k) {
            const double qm = xi * at.a_minus[k];
            const double qp = xi * at.a_plus[k];
            /*
             * e^{bg} expm1(d) = e^{bg+d} (-expm1(-d)); both factors of the
             * second form stay bounded when d is large and positive (T_g
             * above T_f), where the first would overflow against a zero.
             */
            const double d = -0.5 * (Tf - Tg) * qm * qm;
            const double mm = d <= 0.0
                                  ? mfg * std::exp(bg) * std::expm1(d)
                                  : mfg * std::exp(bg + d) * -std::expm1(-d);
            const double dfm = F.deviation(qm);
            const double dgp = G.deviation(qp);
            const double bracket = mm + F.maxwellian(qm) * dgp + dfm * G.maxwellian(qp)
                                 + dfm * dgp - mf * dg_xi - df0 * g_xi;
            acc += at.wbeta[k] * bracket;
        }
        out[j] = acc;
    }
    return out;
}

inline SpectralState collision_rhs(const SpectralState &f, const SpectralState &g,
                                   const AngularQuadrature &quad,
                                   const CrossSectionParams &cross) {
    if (!(f.grid == g.grid))
        throw std::invalid_argument("collision_rhs: f and g must share a grid");
    return SpectralState(f.grid,
                         collision_rhs_samples(f.grid, f.values, g.values, quad, cross),
                         StateKind::test_function);
}

// ── collision_rhs_odd_g ───────────────────────────────────────────────────────
// Same bracket with an odd array u in the output slot (odd data arise as
// spectral derivatives, F(v g) = i ĝ').  Odd functions carry no Maxwellian
// part, so the bracket is f̂(ξa₋) u(ξa₊) - f̂(0) u(ξ) with u interpolated by
// the natural-at-zero spline (the correct odd extension).
inline std::vector<double> collision_rhs_odd_g(const FourierGrid &grid,
                                               const std::vector<double> &fv,
                                               const std::vector<double> &u,
                                               const AngularQuadrature &quad,
                                               const CrossSectionParams &cross) {
    cross.validate();
    if (u.size() != grid.n)
        throw std::invalid_argument("collision_rhs_odd_g: sample count does not match grid");
    const detail::AngleTables at = detail::angle_tables(cross, quad);
    const SplitInterp F(grid, fv);
    const CubicSpline U(grid, u, SplineLeftBC::natural);
    const double f0 = fv[0];
    const std::size_t nq = at.wbeta.size();

    std::vector<double> out(grid.n, 0.0);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double xi = grid.node(j);
        double acc = 0.0;
        for (std::size_t k = 0; k < nq; ++k) {
            const double fa = F.eval(xi * at.a_minus[k]);
            acc += at.wbeta[k] * (fa * U.eval(xi * at.a_plus[k]) - f0 * u[j]);
        }
        out[j] = acc;
    }
    return out;
}

}  // namespace kacspec
