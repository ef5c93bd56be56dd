#pragma once

/*
 * quadrature.hpp - angular quadrature for the grazing-singular kernel.
 *
 * Nodes live on (ε, π/2] with weights carrying a factor 2 for the θ → -θ
 * folding of the even integrand.  Two schemes:
 *
 *   gauss_panels:      geometric panels from ε to π/2, 4-point Gauss-Legendre
 *                      on each panel.  Resolves β's θ^{-1-2s} blow-up with a
 *                      few dozen nodes.
 *   graded_trapezoid:  trapezoid on geometrically graded nodes; first-order
 *                      near the cutoff, needs several hundred nodes.
 *
 * Every rule is gated by a stabilization test on the finite angular moment
 * ∑ w β(θ) θ²: the value at n nodes must agree with the value at 2n nodes to
 * four significant digits, otherwise construction fails.  This is the
 * operational form of "∫ θ² β dθ converges while ∫ β dθ does not".
 */

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cross_section.hpp"

namespace kacspec {

enum class QuadratureScheme { gauss_panels, graded_trapezoid };

struct AngularQuadrature {
    std::vector<double> nodes;    // increasing, all > theta_cut
    std::vector<double> weights;  // positive, folded (carry the factor 2)
    double moment = 0.0;          // ∑ w β θ², the stabilized finite moment
};

namespace detail {

// 4-point Gauss-Legendre on [-1, 1].
constexpr double GL4_X[4] = {-0.8611363115940526, -0.3399810435848563,
                              0.3399810435848563,  0.8611363115940526};
constexpr double GL4_W[4] = {0.3478548451374538, 0.6521451548625461,
                             0.6521451548625461, 0.3478548451374538};

inline void build_nodes(const CrossSectionParams &p, std::size_t n,
                        QuadratureScheme scheme,
                        std::vector<double> &nodes, std::vector<double> &weights) {
    const double a = p.theta_cut;
    const double b = 3.14159265358979323846 / 2.0;
    nodes.clear();
    weights.clear();
    if (scheme == QuadratureScheme::gauss_panels) {
        const std::size_t n_panels = (n / 4 > 4) ? n / 4 : 4;
        const double ratio = b / a;
        for (std::size_t i = 0; i < n_panels; ++i) {
            const double lo = a * std::pow(ratio, static_cast<double>(i) / n_panels);
            const double hi = a * std::pow(ratio, static_cast<double>(i + 1) / n_panels);
            const double mid = 0.5 * (lo + hi);
            const double half = 0.5 * (hi - lo);
            for (int q = 0; q < 4; ++q) {
                nodes.push_back(mid + half * GL4_X[q]);
                weights.push_back(2.0 * half * GL4_W[q]);
            }
        }
    } else {
        std::vector<double> t(n);
        for (std::size_t j = 0; j < n; ++j)
            t[j] = a * std::pow(b / a, static_cast<double>(j) / (n - 1));
        weights.assign(n, 0.0);
        weights[0] = 0.5 * (t[1] - t[0]);
        for (std::size_t j = 1; j + 1 < n; ++j)
            weights[j] = 0.5 * (t[j + 1] - t[j - 1]);
        weights[n - 1] = 0.5 * (t[n - 1] - t[n - 2]);
        for (double &w : weights) w *= 2.0;
        nodes = std::move(t);
    }
}

inline double theta2_moment(const CrossSectionParams &p,
                            const std::vector<double> &nodes,
                            const std::vector<double> &weights) {
    double m = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k)
        m += weights[k] * beta(nodes[k], p) * nodes[k] * nodes[k];
    return m;
}

}  // namespace detail

inline AngularQuadrature build_quadrature(const CrossSectionParams &p, std::size_t n,
                                          QuadratureScheme scheme = QuadratureScheme::gauss_panels) {
    p.validate();
    if (n < 16)
        throw std::invalid_argument("build_quadrature: need at least 16 nodes");

    AngularQuadrature q;
    detail::build_nodes(p, n, scheme, q.nodes, q.weights);
    q.moment = detail::theta2_moment(p, q.nodes, q.weights);

    std::vector<double> nodes2, weights2;
    detail::build_nodes(p, 2 * n, scheme, nodes2, weights2);
    const double moment2 = detail::theta2_moment(p, nodes2, weights2);
    if (std::abs(moment2 - q.moment) > 1e-4 * std::abs(moment2))
        throw std::domain_error(
            "build_quadrature: theta^2 moment has not stabilized to 4 significant digits; "
            "refine n or switch schemes");
    return q;
}

// Total quadrature loss mass ∑ w β.  Finite only because of the grazing
// cutoff; grows like theta_cut^{-2s}.  Used as the coercivity correction
// constant.
inline double loss_mass(const CrossSectionParams &p, const AngularQuadrature &q) {
    double m = 0.0;
    for (std::size_t k = 0; k < q.nodes.size(); ++k)
        m += q.weights[k] * beta(q.nodes[k], p);
    return m;
}

}  // namespace kacspec
