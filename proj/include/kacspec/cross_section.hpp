#pragma once

/*
 * cross_section.hpp - the non-cutoff angular cross section.
 *
 * The collision kernel concentrates on grazing angles with a non-integrable
 * singularity:
 *
 *   β(θ) = b₀ |cos θ| / |sin θ|^{1+2s},     0 < s < 1,
 *
 * so ∫β dθ = ∞ while ∫θ²β dθ < ∞.  Everything downstream (quadrature,
 * collision brackets) is organized around that cancellation: gain and loss
 * are never integrated separately.
 *
 * angle_map selects the Bobylev arguments fed to the bilinear bracket:
 *   full_angle: (|sin θ|, |cos θ|)       - the 1D equation as written,
 *   half_angle: (|sin θ/2|, |cos θ/2|)   - the reduced radial 3D equation.
 */

#include <cmath>
#include <stdexcept>

namespace kacspec {

enum class AngleMap { full_angle, half_angle };

struct CrossSectionParams {
    double s = 0.75;          // singularity order, 0 < s < 1
    double b0 = 1.0;          // kernel strength, > 0
    double theta_cut = 1e-4;  // grazing cutoff ε, 0 < ε < π/8
    AngleMap angle_map = AngleMap::full_angle;

    void validate() const {
        if (!(s > 0.0) || !(s < 1.0))
            throw std::invalid_argument("CrossSectionParams: s must lie in (0, 1)");
        if (!(b0 > 0.0))
            throw std::invalid_argument("CrossSectionParams: b0 must be positive");
        if (!(theta_cut > 0.0) || !(theta_cut < 3.14159265358979323846 / 8.0))
            throw std::invalid_argument("CrossSectionParams: theta_cut must lie in (0, pi/8)");
    }
};

// β(θ) for θ ∈ (0, π/2].  θ = 0 is a pole and is rejected rather than
// returning infinity.
inline double beta(double theta, const CrossSectionParams &p) {
    if (theta == 0.0)
        throw std::domain_error("beta: theta = 0 is the non-integrable pole");
    return p.b0 * std::abs(std::cos(theta))
         / std::pow(std::abs(std::sin(theta)), 1.0 + 2.0 * p.s);
}

}  // namespace kacspec
