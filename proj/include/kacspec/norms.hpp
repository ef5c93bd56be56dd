#pragma once

/*
 * norms.hpp - weighted Sobolev norms and conserved quantities, all computed
 * on the spectral side.
 *
 * Conventions (f real and even, Plancherel with the 1/2π normalization):
 *
 *   ||f||²_{L²}            = (1/2π) ∫_ℝ f̂² dξ = (1/π) ∫_0^Ξ f̂² dξ
 *   ||<v>^ℓ f||²           = Σ_{i≤ℓ} binom terms via F(v f) = i f̂',
 *                            F(v² f) = -f̂''  (finite differences on the grid)
 *   ||f||²_{H^k}           inserts the multiplier (1+ξ²)^k under the integral
 *   mass  = f̂(0),  energy = -f̂''(0)  (five-point one-sided even stencil)
 *   ||f||_{L¹₂} = mass + energy       (for nonnegative densities)
 *
 * half_line_integral is the single quadrature primitive: trapezoid over
 * [0, Ξ] divided by π, which doubles the half-grid and applies 1/2π.
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "mollifier.hpp"

namespace kacspec {

// ── Quadrature and finite-difference primitives ──────────────────────────────

inline double half_line_integral(const std::vector<double> &a, double h) {
    if (a.size() < 2)
        throw std::invalid_argument("half_line_integral: need at least 2 samples");
    double s = 0.5 * (a.front() + a.back());
    for (std::size_t j = 1; j + 1 < a.size(); ++j) s += a[j];
    return s * h / 3.14159265358979323846;
}

// First derivative of an even sample set: zero at ξ = 0 by symmetry,
// centered in the interior, one-sided at Ξ.
inline std::vector<double> fd1_even(const std::vector<double> &a, double h) {
    const std::size_t n = a.size();
    std::vector<double> o(n, 0.0);
    for (std::size_t j = 1; j + 1 < n; ++j) o[j] = (a[j + 1] - a[j - 1]) / (2.0 * h);
    o[n - 1] = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) / (2.0 * h);
    return o;
}

// Second derivative: even reflection at 0, centered interior, one-sided at Ξ.
inline std::vector<double> fd2_even(const std::vector<double> &a, double h) {
    const std::size_t n = a.size();
    std::vector<double> o(n, 0.0);
    o[0] = 2.0 * (a[1] - a[0]) / (h * h);
    for (std::size_t j = 1; j + 1 < n; ++j)
        o[j] = (a[j + 1] - 2.0 * a[j] + a[j - 1]) / (h * h);
    o[n - 1] = (2.0 * a[n - 1] - 5.0 * a[n - 2] + 4.0 * a[n - 3] - a[n - 4]) / (h * h);
    return o;
}

// Fourth-order estimate of -f̂''(0) from the even extension:
//   f̂''(0) ≈ (-2 f̂₂ + 32 f̂₁ - 30 f̂₀) / (12 h²).
inline double energy_fd5(const std::vector<double> &a, double h) {
    if (a.size() < 3)
        throw std::invalid_argument("energy_fd5: need at least 3 samples");
    return -(-2.0 * a[2] + 32.0 * a[1] - 30.0 * a[0]) / (12.0 * h * h);
}

// ── Conserved quantities ──────────────────────────────────────────────────────

struct ConservedQuantities {
    double mass = 0.0;    // ∫ f dv = f̂(0)
    double energy = 0.0;  // ∫ v² f dv = -f̂''(0)
};

inline ConservedQuantities conserved_quantities(const SpectralState &st) {
    return {st.values[0], energy_fd5(st.values, st.grid.spacing())};
}

inline double l12_norm(const SpectralState &st) {
    const ConservedQuantities c = conserved_quantities(st);
    return c.mass + c.energy;
}

// ── Weighted norms ────────────────────────────────────────────────────────────

enum class WeightKind { none, exp_mollifier, poly_mollifier };

struct WeightedNormSpec {
    double k = 0.0;   // Sobolev index, >= 0
    int l = 0;        // velocity-moment order, 0, 1 or 2
    WeightKind weight = WeightKind::none;
    ExpMollifierParams exp_params;
    PolyMollifierParams poly_params;
    double t = 0.0;   // evaluation time for the mollifier weight

    void validate() const {
        if (k < 0.0)
            throw std::invalid_argument("WeightedNormSpec: k must be nonnegative");
        if (l < 0 || l > 2)
            throw std::invalid_argument("WeightedNormSpec: l must be 0, 1 or 2");
        if (weight == WeightKind::exp_mollifier) exp_params.validate();
        if (weight == WeightKind::poly_mollifier) poly_params.validate();
    }
};

inline std::vector<double> mollifier_samples(const FourierGrid &g,
                                             const WeightedNormSpec &spec) {
    std::vector<double> w(g.n, 1.0);
    if (spec.weight == WeightKind::exp_mollifier)
        for (std::size_t j = 0; j < g.n; ++j)
            w[j] = g_delta(spec.t, g.node(j), spec.exp_params);
    else if (spec.weight == WeightKind::poly_mollifier)
        for (std::size_t j = 0; j < g.n; ++j)
            w[j] = m_delta(spec.t, g.node(j), spec.poly_params);
    return w;
}

/*
 * || <v>^ℓ (W f) ||_{H^k} on raw samples.  The velocity weight expands as
 *   ℓ=0:  n₀,   ℓ=1:  n₀+n₁,   ℓ=2:  n₀+2n₁+n₂
 * with n_i the H^k pairing of the i-th spectral derivative, since
 * <v>² = 1 + v² and <v>⁴ = 1 + 2v² + v⁴.
 */
inline double weighted_norm_samples(const FourierGrid &g, const std::vector<double> &x,
                                    double k, int l) {
    const double h = g.spacing();
    auto hk_pairing = [&](const std::vector<double> &a) {
        std::vector<double> integrand(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double xi = g.node(j);
            integrand[j] = std::pow(1.0 + xi * xi, k) * a[j] * a[j];
        }
        return half_line_integral(integrand, h);
    };
    double total = hk_pairing(x);
    if (l >= 1) {
        const std::vector<double> d1 = fd1_even(x, h);
        total += (l == 1 ? 1.0 : 2.0) * hk_pairing(d1);
        if (l == 2) total += hk_pairing(fd2_even(x, h));
    }
    return std::sqrt(total);
}

inline double weighted_norm(const SpectralState &st, const WeightedNormSpec &spec) {
    spec.validate();
    std::vector<double> x = st.values;
    if (spec.weight != WeightKind::none) {
        const std::vector<double> w = mollifier_samples(st.grid, spec);
        for (std::size_t j = 0; j < x.size(); ++j) x[j] *= w[j];
    }
    return weighted_norm_samples(st.grid, x, spec.k, spec.l);
}

}  // namespace kacspec
