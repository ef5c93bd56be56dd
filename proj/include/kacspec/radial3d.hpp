#pragma once

/*
 * radial3d.hpp - the bridge between radial 3D Boltzmann data and the 1D
 * spectral machinery.
 *
 * A radial density f(v) = φ(|v|) reduces to its one-dimensional marginal
 *
 *   F(u) = ∫_{ℝ²} f(v₁, v₂, u) dv₁ dv₂ = 2π ∫_{|u|}^{R} φ(r) r dr
 *
 * (polar coordinates in the orthogonal plane supply the r weight).  The
 * marginal inherits moments, the 3D angular kernel reduces to
 * β(θ) = 2π sinθ b(cosθ) paired with half-angle collision arguments, and 1D
 * spectral conclusions lift back as f̂(ξ) = F̂(|ξ|).
 *
 * Discrete convention: the reduction treats g = φ·r as piecewise linear (the
 * trapezoid rule in r).  Every derived integral here uses the same piecewise
 * reconstruction, so mass and second-moment identities hold to round-off
 * rather than to quadrature accuracy.
 */

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cross_section.hpp"
#include "grid.hpp"
#include "interp.hpp"

namespace kacspec {

namespace detail {
constexpr double PI3 = 3.14159265358979323846;
// 3-point Gauss-Legendre on [0, 1], exact through degree 5.
constexpr double GL3_X[3] = {0.11270166537925831, 0.5, 0.88729833462074169};
constexpr double GL3_W[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
}  // namespace detail

// ── RadialProfile3D ───────────────────────────────────────────────────────────
struct RadialProfile3D {
    double r_max = 0.0;
    std::vector<double> values;  // φ at uniform nodes on [0, r_max]

    RadialProfile3D() = default;
    RadialProfile3D(double R, std::vector<double> v) : r_max(R), values(std::move(v)) {
        validate();
    }

    std::size_t n() const { return values.size(); }
    double spacing() const { return r_max / static_cast<double>(n() - 1); }
    double node(std::size_t j) const { return static_cast<double>(j) * spacing(); }

    void validate(double tail_floor = 1e-12) const {
        if (values.size() < 9)
            throw std::invalid_argument("RadialProfile3D: need at least 9 nodes");
        if (!(r_max > 0.0))
            throw std::invalid_argument("RadialProfile3D: r_max must be positive");
        for (double v : values) {
            if (!std::isfinite(v))
                throw std::domain_error("RadialProfile3D: non-finite sample");
            if (v < 0.0)
                throw std::domain_error("RadialProfile3D: profile must be nonnegative");
        }
        if (values.back() > tail_floor)
            throw std::domain_error("RadialProfile3D: profile has not decayed at r_max");
    }
};

// Standard 3D Gaussian, unit mass: φ(r) = (2π)^{-3/2} e^{-r²/2}.
inline RadialProfile3D gaussian_profile(std::size_t n, double r_max) {
    std::vector<double> v(n);
    const double c = std::pow(2.0 * detail::PI3, -1.5);
    const double h = r_max / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = static_cast<double>(j) * h;
        v[j] = c * std::exp(-0.5 * r * r);
    }
    return RadialProfile3D(r_max, std::move(v));
}

// Uniform ball of density ρ and radius R₀ < r_max.  A node landing exactly
// on R₀ takes the midpoint value ρ/2 (the symmetric limit of the jump).
inline RadialProfile3D ball_profile(std::size_t n, double r_max, double R0, double rho) {
    if (!(R0 > 0.0) || !(R0 < r_max))
        throw std::invalid_argument("ball_profile: need 0 < R0 < r_max");
    std::vector<double> v(n);
    const double h = r_max / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = static_cast<double>(j) * h;
        v[j] = (r < R0) ? rho : (r == R0 ? 0.5 * rho : 0.0);
    }
    return RadialProfile3D(r_max, std::move(v));
}

// ── reduce_profile ────────────────────────────────────────────────────────────
class ReducedMarginal {
public:
    explicit ReducedMarginal(const RadialProfile3D &prof) : prof_(prof) {
        prof.validate();
        const std::size_t n = prof.n();
        const double h = prof.spacing();
        g_.resize(n);
        for (std::size_t j = 0; j < n; ++j) g_[j] = prof.values[j] * prof.node(j);
        suffix_.assign(n, 0.0);
        for (std::size_t j = n - 1; j-- > 0;)
            suffix_[j] = suffix_[j + 1]
                       + 2.0 * detail::PI3 * 0.5 * h * (g_[j] + g_[j + 1]);
    }

    // F(u) = 2π ∫_{|u|}^{R} φ r dr with g = φ r piecewise linear.
    double operator()(double u) const {
        const double q = std::abs(u);
        if (q > prof_.r_max)
            throw std::domain_error("reduce_profile: |u| exceeds the profile radius");
        const double h = prof_.spacing();
        std::size_t j = static_cast<std::size_t>(q / h);
        if (j >= prof_.n() - 1) j = prof_.n() - 2;
        const double rho = q - static_cast<double>(j) * h;
        if (rho == 0.0) return suffix_[j];
        const double sl = (g_[j + 1] - g_[j]) / h;
        const double tail = g_[j] * (h - rho) + 0.5 * sl * (h * h - rho * rho);
        return suffix_[j + 1] + 2.0 * detail::PI3 * tail;
    }

    const RadialProfile3D &profile() const { return prof_; }
    const std::vector<double> &node_values() const { return suffix_; }

private:
    RadialProfile3D prof_;
    std::vector<double> g_;       // φ r at nodes
    std::vector<double> suffix_;  // F at nodes
};

inline std::vector<double> reduce_profile(const RadialProfile3D &prof,
                                          const std::vector<double> &u_grid) {
    const ReducedMarginal F(prof);
    std::vector<double> out(u_grid.size());
    for (std::size_t i = 0; i < u_grid.size(); ++i) out[i] = F(u_grid[i]);
    return out;
}

// ── Moment identities (shared piecewise-linear convention) ───────────────────

// 4π ∫₀^R g_lin(r) r^{m} ... weight(r) dr by per-cell 3-point Gauss, exact for
// the polynomial weights used below.
inline double radial_weighted_integral(const RadialProfile3D &prof,
                                       const std::function<double(double)> &weight) {
    const std::size_t n = prof.n();
    const double h = prof.spacing();
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double g0 = prof.values[j] * prof.node(j);
        const double g1 = prof.values[j + 1] * prof.node(j + 1);
        for (int q = 0; q < 3; ++q) {
            const double t = detail::GL3_X[q];
            const double r = prof.node(j) + t * h;
            const double g = g0 * (1.0 - t) + g1 * t;
            acc += detail::GL3_W[q] * h * g * weight(r);
        }
    }
    return 4.0 * detail::PI3 * acc;
}

// ∫_ℝ F(u) weight(u) du = 2 ∫₀^R ... with the in-cell reconstruction of F.
inline double marginal_weighted_integral(const ReducedMarginal &F,
                                         const std::function<double(double)> &weight) {
    const RadialProfile3D &prof = F.profile();
    const double h = prof.spacing();
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < prof.n(); ++j) {
        for (int q = 0; q < 3; ++q) {
            const double u = prof.node(j) + detail::GL3_X[q] * h;
            acc += detail::GL3_W[q] * h * F(u) * weight(u);
        }
    }
    return 2.0 * acc;
}

// 3D mass 4π ∫ φ r² dr; equals ∫ F du to round-off by Fubini.
inline double mass_3d(const RadialProfile3D &prof) {
    return radial_weighted_integral(prof, [](double r) { return r; });
}
inline double mass_marginal(const ReducedMarginal &F) {
    return marginal_weighted_integral(F, [](double) { return 1.0; });
}

// Second moments: ∫ u² F du = (1/3) ∫ |v|² f dv by coordinate symmetry.
inline double second_moment_3d(const RadialProfile3D &prof) {
    return radial_weighted_integral(prof, [](double r) { return r * r * r; });
}
inline double second_moment_marginal(const ReducedMarginal &F) {
    return marginal_weighted_integral(F, [](double u) { return u * u; });
}

// ⟨·⟩^k moments for the mapping ∫⟨u⟩^k F du ≤ C_k ∫⟨v⟩^k f dv, k ∈ {0,1,2}.
inline double bracket_moment_3d(const RadialProfile3D &prof, int k) {
    if (k < 0 || k > 2) throw std::invalid_argument("bracket_moment_3d: k must be 0, 1 or 2");
    return radial_weighted_integral(prof, [k](double r) {
        return std::pow(1.0 + r * r, 0.5 * k) * r;
    });
}
inline double bracket_moment_marginal(const ReducedMarginal &F, int k) {
    if (k < 0 || k > 2)
        throw std::invalid_argument("bracket_moment_marginal: k must be 0, 1 or 2");
    return marginal_weighted_integral(F, [k](double u) {
        return std::pow(1.0 + u * u, 0.5 * k);
    });
}

// ── Kernel reduction ──────────────────────────────────────────────────────────
/*
 * The 3D angular kernel b(cosθ), parametric b(cosθ) = b₀ θ^{-2-2s} or
 * tabulated on θ ∈ (0, π/2].  Azimuthal integration turns it into the 1D
 * cross section β(θ) = 2π sinθ b(cosθ), to be paired with half-angle
 * collision arguments.
 */
struct Kernel3D {
    double s = 0.75;
    double b0 = 1.0;
    std::vector<double> table_theta;  // optional tabulation, increasing in (0, pi/2]
    std::vector<double> table_b;

    double b_of_theta(double theta) const {
        if (!table_theta.empty()) {
            if (table_theta.size() != table_b.size() || table_theta.size() < 2)
                throw std::invalid_argument("Kernel3D: malformed table");
            if (theta <= table_theta.front()) return table_b.front();
            if (theta >= table_theta.back()) return table_b.back();
            std::size_t j = 0;
            while (table_theta[j + 1] < theta) ++j;
            const double t = (theta - table_theta[j]) / (table_theta[j + 1] - table_theta[j]);
            return table_b[j] * (1.0 - t) + table_b[j + 1] * t;
        }
        return b0 * std::pow(theta, -2.0 - 2.0 * s);
    }

    void validate() const {
        if (!(s > 0.0) || !(s < 1.0))
            throw std::invalid_argument("Kernel3D: s must lie in (0, 1)");
        if (!(b0 > 0.0)) throw std::invalid_argument("Kernel3D: b0 must be positive");
        for (double v : table_b)
            if (v < 0.0) throw std::domain_error("Kernel3D: b must be nonnegative");
    }
};

inline std::function<double(double)> kernel_3d_to_1d(const Kernel3D &k) {
    k.validate();
    return [k](double theta) { return 2.0 * detail::PI3 * std::sin(theta) * k.b_of_theta(theta); };
}

// Kac-form parameters with the same grazing asymptotics,
// 2π sinθ b₀ θ^{-2-2s} ~ (2π b₀) θ^{-1-2s}, paired with half-angle arguments.
inline CrossSectionParams kac_equivalent_params(const Kernel3D &k, double theta_cut) {
    k.validate();
    CrossSectionParams p;
    p.s = k.s;
    p.b0 = 2.0 * detail::PI3 * k.b0;
    p.theta_cut = theta_cut;
    p.angle_map = AngleMap::half_angle;
    p.validate();
    return p;
}

// ── Lifting 1D spectra back to ℝ³ ────────────────────────────────────────────
class LiftedSpectrum {
public:
    explicit LiftedSpectrum(const SpectralState &F_hat)
        : interp_(F_hat), xi_max_(F_hat.grid.xi_max) {}

    // f̂(ξ) = F̂(|ξ|) for ξ ∈ ℝ³; rejects |ξ| beyond the grid.
    double operator()(double xi1, double xi2, double xi3) const {
        return radial(std::sqrt(xi1 * xi1 + xi2 * xi2 + xi3 * xi3));
    }
    double radial(double r) const {
        if (r > xi_max_)
            throw std::domain_error("lift_spectrum: |xi| exceeds the grid extent");
        return interp_(r);
    }
    double xi_max() const { return xi_max_; }

private:
    FourierInterpolant interp_;
    double xi_max_;
};

inline LiftedSpectrum lift_spectrum(const SpectralState &F_hat) {
    return LiftedSpectrum(F_hat);
}

// ||e^{(c0/2)⟨·⟩} f̂||²_{L²(ℝ³)} in spherical shells:
// 4π ∫₀^Ξ e^{c0 ⟨r⟩} F̂(r)² r² dr, 4-point Gauss per grid cell.
inline double lifted_shell_integral(const SpectralState &F_hat, double c0) {
    const LiftedSpectrum lift(F_hat);
    const FourierGrid &g = F_hat.grid;
    const double h = g.spacing();
    static const double X[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563,  0.8611363115940526};
    static const double W[4] = {0.3478548451374538, 0.6521451548625461,
                                0.6521451548625461, 0.3478548451374538};
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < g.n; ++j) {
        const double mid = g.node(j) + 0.5 * h;
        for (int q = 0; q < 4; ++q) {
            const double r = mid + 0.5 * h * X[q];
            const double Fr = lift.radial(r);
            acc += 0.5 * h * W[q] * std::exp(c0 * std::sqrt(1.0 + r * r)) * Fr * Fr * r * r;
        }
    }
    return 4.0 * detail::PI3 * acc;
}

// ── Transforms for the round trip ─────────────────────────────────────────────

// F̂(ξ) = ∫_ℝ F(u) e^{-iuξ} du = 2 ∫₀^R F(u) cos(uξ) du, trapezoid on the
// profile grid.
inline std::vector<double> marginal_transform(const ReducedMarginal &F,
                                              const FourierGrid &fg) {
    const RadialProfile3D &prof = F.profile();
    const double h = prof.spacing();
    const std::vector<double> &Fv = F.node_values();
    std::vector<double> out(fg.n, 0.0);
    for (std::size_t k = 0; k < fg.n; ++k) {
        const double xi = fg.node(k);
        double acc = 0.5 * (Fv.front() + Fv.back() * std::cos(prof.r_max * xi));
        for (std::size_t j = 1; j + 1 < prof.n(); ++j)
            acc += Fv[j] * std::cos(prof.node(j) * xi);
        out[k] = 2.0 * h * acc;
    }
    return out;
}

// 3D radial transform f̂(ξ) = 4π ∫₀^R φ(r) r sin(rξ)/ξ dr (ξ = 0 gives the
// mass), trapezoid on the profile grid.
inline std::vector<double> radial_transform_3d(const RadialProfile3D &prof,
                                               const FourierGrid &fg) {
    const double h = prof.spacing();
    std::vector<double> out(fg.n, 0.0);
    for (std::size_t k = 0; k < fg.n; ++k) {
        const double xi = fg.node(k);
        double acc = 0.0;
        for (std::size_t j = 0; j < prof.n(); ++j) {
            const double r = prof.node(j);
            const double w = (j == 0 || j + 1 == prof.n()) ? 0.5 * h : h;
            const double kernel = (xi == 0.0) ? r * r : r * std::sin(r * xi) / xi;
            acc += w * prof.values[j] * kernel;
        }
        out[k] = 4.0 * detail::PI3 * acc;
    }
    return out;
}

}  // namespace kacspec
