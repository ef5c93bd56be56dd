#pragma once

/*
 * grid.hpp - uniform frequency grid and spectral states.
 *
 * All spectral data lives on the half-line grid ξ_j = j·h, j = 0..n-1,
 * h = Ξ/(n-1).  States are characteristic functions f̂(ξ) of even real
 * densities, so they are real, even, and attain their maximum at ξ = 0:
 *
 *   f̂(0) = ∫ f dv = mass,   |f̂(ξ)| ≤ f̂(0).
 *
 * Probe states used by quadratic-form diagnostics (frequency bumps,
 * derivative arrays) are not characteristic functions; they skip the
 * density-shape validation and only require finite entries.
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kacspec {

// ── FourierGrid ───────────────────────────────────────────────────────────────
// Uniform nodes on [0, xi_max].  Even symmetry makes the half-line grid a
// complete description of the full line.
struct FourierGrid {
    std::size_t n = 0;     // node count, at least 9
    double xi_max = 0.0;   // grid extent Ξ, must be > 0

    FourierGrid() = default;
    FourierGrid(std::size_t n_, double xi_max_) : n(n_), xi_max(xi_max_) {
        if (n < 9)
            throw std::invalid_argument("FourierGrid: need at least 9 nodes");
        if (!(xi_max > 0.0) || !std::isfinite(xi_max))
            throw std::invalid_argument("FourierGrid: xi_max must be positive and finite");
    }

    double spacing() const { return xi_max / static_cast<double>(n - 1); }
    double node(std::size_t j) const { return static_cast<double>(j) * spacing(); }

    std::vector<double> nodes() const {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = node(j);
        return x;
    }

    bool operator==(const FourierGrid &o) const { return n == o.n && xi_max == o.xi_max; }
};

// ── SpectralState ─────────────────────────────────────────────────────────────
// Density states must look like characteristic functions: positive mass at
// ξ = 0 dominating every other sample.  Test-function states (diagnostic
// probes) only need finite entries.
enum class StateKind { density, test_function };

struct SpectralState {
    FourierGrid grid;
    std::vector<double> values;   // f̂ at grid.nodes()
    StateKind kind = StateKind::density;

    SpectralState() = default;
    SpectralState(const FourierGrid &g, std::vector<double> v,
                  StateKind k = StateKind::density)
        : grid(g), values(std::move(v)), kind(k) {
        validate();
    }

    double mass() const { return values.empty() ? 0.0 : values[0]; }

    void validate(double tol_mono = 1e-12) const {
        if (values.size() != grid.n)
            throw std::invalid_argument("SpectralState: value count does not match grid");
        for (double v : values)
            if (!std::isfinite(v))
                throw std::domain_error("SpectralState: non-finite sample");
        if (kind == StateKind::density) {
            if (!(values[0] > 0.0))
                throw std::domain_error("SpectralState: density state needs positive mass at xi = 0");
            for (std::size_t j = 1; j < values.size(); ++j)
                if (std::abs(values[j]) > values[0] + tol_mono)
                    throw std::domain_error(
                        "SpectralState: density state exceeds its mass at node " + std::to_string(j));
        }
    }
};

// ── Closed-form initial states ───────────────────────────────────────────────

// Maxwellian with unit mass and unit temperature: f̂(ξ) = e^{-ξ²/2}.
inline SpectralState gaussian_state(const FourierGrid &g) {
    std::vector<double> v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double xi = g.node(j);
        v[j] = std::exp(-0.5 * xi * xi);
    }
    return SpectralState(g, std::move(v));
}

// Transform of the Cauchy-type profile: f̂(ξ) = 1/(1+ξ²), slowly decaying,
// far from Maxwellian.  The standard rough datum for smoothing experiments.
inline SpectralState laplace_state(const FourierGrid &g) {
    std::vector<double> v(g.n);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double xi = g.node(j);
        v[j] = 1.0 / (1.0 + xi * xi);
    }
    return SpectralState(g, std::move(v));
}

/*
 * Reduced spectrum of a uniform 3D ball of density ρ and radius R₀:
 *
 *   F̂(ξ) = 4πρ (sin(R₀ξ) - R₀ξ cos(R₀ξ)) / ξ³
 *
 * with the small-argument series 4πρ (R₀³/3 - R₀⁵ξ²/30 + R₀⁷ξ⁴/840) used
 * below R₀ξ < 1e-2 to avoid cancellation.
 */
inline double uniform_ball_transform(double xi, double radius, double density) {
    const double a = radius * std::abs(xi);
    const double fourpirho = 4.0 * 3.14159265358979323846 * density;
    if (a < 1e-2) {
        const double r3 = radius * radius * radius;
        const double x2 = xi * xi;
        return fourpirho * r3 * (1.0 / 3.0 - radius * radius * x2 / 30.0
                                 + radius * radius * radius * radius * x2 * x2 / 840.0);
    }
    return fourpirho * (std::sin(a) - a * std::cos(a)) / (xi * xi * std::abs(xi));
}

inline SpectralState uniform_ball_state(const FourierGrid &g, double radius, double density) {
    if (!(radius > 0.0) || !(density > 0.0))
        throw std::invalid_argument("uniform_ball_state: radius and density must be positive");
    std::vector<double> v(g.n);
    for (std::size_t j = 0; j < g.n; ++j)
        v[j] = uniform_ball_transform(g.node(j), radius, density);
    // the transform oscillates below f̂(0); keep density validation
    return SpectralState(g, std::move(v));
}

}  // namespace kacspec
