#pragma once

/*
 * mollifier.hpp - the two regularized weight families used by the smoothing
 * estimates, with closed-form derivatives.
 *
 * Exponential family (Gevrey/analytic smoothing):
 *
 *   G_δ(t, ξ) = e^{A} / (1 + δ e^{A}),     A = c₀ t ⟨ξ⟩^α,  ⟨ξ⟩ = (1+ξ²)^{1/2}
 *
 * evaluated as 1/(e^{-A} + δ) so large A never overflows; values saturate at
 * 1/δ.  Derivatives share the saturation factor r = 1/(1 + δ e^{A}) =
 * e^{-A}/(e^{-A} + δ):
 *
 *   ∂_t G = c₀ ⟨ξ⟩^α G r
 *   ∂_ξ G = α c₀ t ξ (1+ξ²)^{α/2-1} G r
 *
 * so |∂_t G| ≤ c₀ ⟨ξ⟩^α G and |∂_ξ G| ≤ α c₀ t ⟨ξ⟩^{α-1} G hold pointwise.
 *
 * Polynomial family (Sobolev smoothing on a bounded time window [0, T₀]):
 *
 *   M_δ(t, ξ) = ⟨ξ⟩^{N t - 1} / (1 + δ ξ²)^{N₀},     N₀ = (T₀ N + 4) / 2
 *
 * with ∂_t M = N log⟨ξ⟩ · M exactly.  Times beyond T₀ are rejected: the
 * growing exponent is only controlled by N₀ on that window.
 */

#include <cmath>
#include <stdexcept>

namespace kacspec {

// ── Exponential mollifier ─────────────────────────────────────────────────────
struct ExpMollifierParams {
    double c0 = 0.1;      // smoothing rate, > 0
    double alpha = 1.0;   // Gevrey exponent, 0 < alpha <= 2
    double delta = 0.5;   // regularization, 0 < delta <= 1

    void validate() const {
        if (!(c0 > 0.0))
            throw std::invalid_argument("ExpMollifierParams: c0 must be positive");
        if (!(alpha > 0.0) || !(alpha <= 2.0))
            throw std::invalid_argument("ExpMollifierParams: alpha must lie in (0, 2]");
        if (!(delta > 0.0) || !(delta <= 1.0))
            throw std::invalid_argument("ExpMollifierParams: delta must lie in (0, 1]");
    }
};

namespace detail {
inline double bracket_pow(double xi, double p) {
    return std::pow(1.0 + xi * xi, 0.5 * p);
}
}  // namespace detail

inline double g_delta(double t, double xi, const ExpMollifierParams &p) {
    if (t < 0.0)
        throw std::domain_error("g_delta: t must be nonnegative");
    const double A = p.c0 * t * detail::bracket_pow(xi, p.alpha);
    return 1.0 / (std::exp(-A) + p.delta);
}

inline double g_delta_dt(double t, double xi, const ExpMollifierParams &p) {
    if (t < 0.0)
        throw std::domain_error("g_delta_dt: t must be nonnegative");
    const double A = p.c0 * t * detail::bracket_pow(xi, p.alpha);
    const double ema = std::exp(-A);
    const double G = 1.0 / (ema + p.delta);
    const double r = ema / (ema + p.delta);
    return p.c0 * detail::bracket_pow(xi, p.alpha) * G * r;
}

inline double g_delta_dxi(double t, double xi, const ExpMollifierParams &p) {
    if (t < 0.0)
        throw std::domain_error("g_delta_dxi: t must be nonnegative");
    const double A = p.c0 * t * detail::bracket_pow(xi, p.alpha);
    const double ema = std::exp(-A);
    const double G = 1.0 / (ema + p.delta);
    const double r = ema / (ema + p.delta);
    return p.alpha * p.c0 * t * xi * detail::bracket_pow(xi, p.alpha - 2.0) * G * r;
}

// ── Polynomial mollifier ──────────────────────────────────────────────────────
struct PolyMollifierParams {
    double N = 4.0;       // Sobolev gain rate, > 0
    double T0 = 1.0;      // window length, > 0
    double delta = 0.5;   // regularization, 0 < delta <= 1

    // Regularization order tied to the window so M_delta stays bounded:
    // 2 N0 = T0 N + 4.
    double N0() const { return 0.5 * (T0 * N + 4.0); }

    void validate() const {
        if (!(N > 0.0))
            throw std::invalid_argument("PolyMollifierParams: N must be positive");
        if (!(T0 > 0.0))
            throw std::invalid_argument("PolyMollifierParams: T0 must be positive");
        if (!(delta > 0.0) || !(delta <= 1.0))
            throw std::invalid_argument("PolyMollifierParams: delta must lie in (0, 1]");
    }
};

inline double m_delta(double t, double xi, const PolyMollifierParams &p) {
    if (t < 0.0 || t > p.T0)
        throw std::domain_error("m_delta: t must lie in [0, T0]");
    return detail::bracket_pow(xi, p.N * t - 1.0)
         / std::pow(1.0 + p.delta * xi * xi, p.N0());
}

inline double m_delta_dt(double t, double xi, const PolyMollifierParams &p) {
    // d/dt <xi>^{Nt-1} = N log<xi> <xi>^{Nt-1}; the delta factor is t-free.
    return p.N * 0.5 * std::log1p(xi * xi) * m_delta(t, xi, p);
}

}  // namespace kacspec
