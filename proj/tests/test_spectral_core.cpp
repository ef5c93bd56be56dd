#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "kacspec/cross_section.hpp"
#include "kacspec/grid.hpp"
#include "kacspec/interp.hpp"
#include "kacspec/mollifier.hpp"
#include "kacspec/norms.hpp"
#include "kacspec/quadrature.hpp"

using namespace kacspec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double PI = 3.14159265358979323846;

FourierGrid standard_grid() { return FourierGrid(513, 32.0); }

}  // namespace

// ── FourierGrid ───────────────────────────────────────────────────────────────

TEST_CASE("grid spacing and nodes are uniform on [0, xi_max]", "[spectral_core][grid]") {
    const FourierGrid g(257, 32.0);
    REQUIRE(g.spacing() == 0.125);
    REQUIRE(g.node(0) == 0.0);
    REQUIRE(g.node(16) == 2.0);
    REQUIRE(g.node(256) == 32.0);
    const std::vector<double> xs = g.nodes();
    REQUIRE(xs.size() == 257);
    REQUIRE(xs.front() == 0.0);
    REQUIRE(xs.back() == 32.0);
    REQUIRE(FourierGrid(257, 32.0) == g);
    REQUIRE_FALSE(FourierGrid(129, 32.0) == g);
}

TEST_CASE("grid construction rejects degenerate parameters", "[spectral_core][grid]") {
    REQUIRE_THROWS_AS(FourierGrid(8, 32.0), std::invalid_argument);
    REQUIRE_THROWS_AS(FourierGrid(64, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(FourierGrid(64, -1.0), std::invalid_argument);
}

// ── SpectralState ─────────────────────────────────────────────────────────────

TEST_CASE("density states must carry their mass at xi = 0", "[spectral_core][state]") {
    const FourierGrid g(9, 1.0);

    std::vector<double> ok(9, 0.5);
    ok[0] = 1.0;
    REQUIRE_NOTHROW(SpectralState(g, ok));

    std::vector<double> no_mass(9, 0.0);
    REQUIRE_THROWS_AS(SpectralState(g, no_mass), std::domain_error);

    std::vector<double> overshoot(9, 0.0);
    overshoot[0] = 1.0;
    overshoot[5] = 1.5;
    REQUIRE_THROWS_AS(SpectralState(g, overshoot), std::domain_error);

    std::vector<double> bad_count(8, 1.0);
    REQUIRE_THROWS_AS(SpectralState(g, bad_count), std::invalid_argument);

    std::vector<double> infected(9, 0.1);
    infected[0] = 1.0;
    infected[3] = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(SpectralState(g, infected), std::domain_error);
}

TEST_CASE("test-function states skip the density shape checks", "[spectral_core][state]") {
    const FourierGrid g(9, 1.0);
    std::vector<double> probe(9, 0.0);
    probe[4] = -3.0;  // zero at the origin, negative peak elsewhere
    REQUIRE_NOTHROW(SpectralState(g, probe, StateKind::test_function));
}

TEST_CASE("closed-form states match their formulas", "[spectral_core][state]") {
    const FourierGrid g = standard_grid();
    const SpectralState gs = gaussian_state(g);
    const SpectralState ls = laplace_state(g);
    for (std::size_t j : {std::size_t(0), std::size_t(16), std::size_t(100), std::size_t(512)}) {
        const double xi = g.node(j);
        REQUIRE_THAT(gs.values[j], WithinAbs(std::exp(-0.5 * xi * xi), 1e-15));
        REQUIRE_THAT(ls.values[j], WithinAbs(1.0 / (1.0 + xi * xi), 1e-15));
    }
    REQUIRE(gs.mass() == 1.0);
    REQUIRE(ls.mass() == 1.0);
}

TEST_CASE("uniform ball transform: mass, spot value, branch continuity", "[spectral_core][state]") {
    const double rho = 3.0 / (4.0 * PI);  // unit mass at radius 1

    // F(0) = 4 pi rho R^3 / 3 = total mass
    REQUIRE_THAT(uniform_ball_transform(0.0, 1.0, rho), WithinAbs(1.0, 1e-15));

    // independently computed reference at xi = 1.7
    REQUIRE_THAT(uniform_ball_transform(1.7, 1.0, rho),
                 WithinRel(0.73928380872472659, 1e-13));

    // even in xi
    REQUIRE(uniform_ball_transform(-1.7, 1.0, rho) == uniform_ball_transform(1.7, 1.0, rho));

    // the series and the closed form agree across the switch at R*xi = 1e-2
    const double lo = uniform_ball_transform(0.0099999999, 1.0, rho);
    const double hi = uniform_ball_transform(0.0100000001, 1.0, rho);
    REQUIRE_THAT(lo - hi, WithinAbs(0.0, 1e-10));

    REQUIRE_THROWS_AS(uniform_ball_state(standard_grid(), 0.0, rho), std::invalid_argument);
    REQUIRE_THROWS_AS(uniform_ball_state(standard_grid(), 1.0, -0.1), std::invalid_argument);
    REQUIRE_NOTHROW(uniform_ball_state(standard_grid(), 1.0, rho));
}

// ── Cross section ─────────────────────────────────────────────────────────────

TEST_CASE("cross-section parameter domain is enforced", "[spectral_core][cross]") {
    CrossSectionParams p;
    REQUIRE_NOTHROW(p.validate());
    for (double bad_s : {0.0, 1.0, -0.2, 1.3}) {
        CrossSectionParams q = p;
        q.s = bad_s;
        REQUIRE_THROWS_AS(q.validate(), std::invalid_argument);
    }
    CrossSectionParams q = p;
    q.b0 = 0.0;
    REQUIRE_THROWS_AS(q.validate(), std::invalid_argument);
    q = p;
    q.theta_cut = 0.0;
    REQUIRE_THROWS_AS(q.validate(), std::invalid_argument);
    q = p;
    q.theta_cut = PI / 8.0;
    REQUIRE_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("beta matches its formula and rejects the pole", "[spectral_core][cross]") {
    CrossSectionParams p;
    p.s = 0.75;
    p.b0 = 2.0;
    // beta(pi/4) = 2 cos(pi/4) / sin(pi/4)^{5/2}, computed independently
    REQUIRE_THAT(beta(PI / 4.0, p), WithinRel(3.3635856610148582, 1e-14));
    REQUIRE_THROWS_AS(beta(0.0, p), std::domain_error);
}

// ── Angular quadrature ────────────────────────────────────────────────────────

TEST_CASE("gauss panels reproduce the exact theta^2 moment", "[spectral_core][quadrature]") {
    CrossSectionParams p;  // s = 0.75, b0 = 1, theta_cut = 1e-4
    const AngularQuadrature q = build_quadrature(p, 64);

    REQUIRE(q.nodes.size() == 64);
    REQUIRE(std::is_sorted(q.nodes.begin(), q.nodes.end()));
    REQUIRE(q.nodes.front() >= p.theta_cut);
    REQUIRE(q.nodes.back() <= PI / 2.0);
    for (double w : q.weights) REQUIRE(w > 0.0);

    // 2 * int_eps^{pi/2} beta theta^2 dtheta, high-precision reference
    REQUIRE_THAT(q.moment, WithinRel(4.4103295938576640, 1e-6));

    // weights carry the folding factor: they sum to the doubled interval length
    double wsum = 0.0;
    for (double w : q.weights) wsum += w;
    REQUIRE_THAT(wsum, WithinRel(2.0 * (PI / 2.0 - p.theta_cut), 1e-13));
}

TEST_CASE("loss mass is finite, huge, and scales like the cutoff power", "[spectral_core][quadrature]") {
    CrossSectionParams p;
    const AngularQuadrature q = build_quadrature(p, 64);

    // 2 * int_eps^{pi/2} beta dtheta at eps = 1e-4, high-precision reference
    REQUIRE_THAT(loss_mass(p, q), WithinRel(1333332.0033333334, 2e-5));

    CrossSectionParams p2 = p;
    p2.theta_cut = 2e-4;
    const AngularQuadrature q2 = build_quadrature(p2, 64);
    const double ratio = loss_mass(p, q) / loss_mass(p2, q2);
    REQUIRE_THAT(ratio, WithinRel(std::pow(2.0, 2.0 * p.s), 1e-5));
}

TEST_CASE("graded trapezoid needs several hundred nodes to stabilize", "[spectral_core][quadrature]") {
    CrossSectionParams p;
    REQUIRE_THROWS_AS(build_quadrature(p, 128, QuadratureScheme::graded_trapezoid),
                      std::domain_error);
    const AngularQuadrature q = build_quadrature(p, 512, QuadratureScheme::graded_trapezoid);
    REQUIRE_THAT(q.moment, WithinRel(4.4103295938576640, 1e-4));
    double wsum = 0.0;
    for (double w : q.weights) wsum += w;
    REQUIRE_THAT(wsum, WithinRel(2.0 * (PI / 2.0 - p.theta_cut), 1e-13));
}

TEST_CASE("quadrature construction rejects tiny node counts", "[spectral_core][quadrature]") {
    CrossSectionParams p;
    REQUIRE_THROWS_AS(build_quadrature(p, 15), std::invalid_argument);
}

// ── Cubic spline and even interpolation ──────────────────────────────────────

TEST_CASE("cubic spline reproduces samples at nodes bitwise", "[spectral_core][interp]") {
    const FourierGrid g(65, 8.0);
    std::vector<double> y(g.n);
    for (std::size_t j = 0; j < g.n; ++j) y[j] = std::exp(-0.5 * g.node(j) * g.node(j));
    const CubicSpline sp(g, y);
    for (std::size_t j : {std::size_t(0), std::size_t(1), std::size_t(32), std::size_t(64)})
        REQUIRE(sp.eval(g.node(j)) == y[j]);
    REQUIRE(sp.xmax() == 8.0);
}

TEST_CASE("cubic spline interpolates a smooth profile to fourth order", "[spectral_core][interp]") {
    const FourierGrid g(257, 32.0);
    std::vector<double> y(g.n);
    for (std::size_t j = 0; j < g.n; ++j) y[j] = std::exp(-0.5 * g.node(j) * g.node(j));
    const CubicSpline sp(g, y);
    double err = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double q = 4.0 * i / 399.0;
        err = std::max(err, std::abs(sp.eval(q) - std::exp(-0.5 * q * q)));
    }
    REQUIRE(err < 1e-5);

    // the clamped row encodes even symmetry: flat slope at the origin
    const double slope0 = (sp.eval(1e-6) - sp.eval(0.0)) / 1e-6;
    REQUIRE_THAT(slope0, WithinAbs(0.0, 1e-3));

    std::vector<double> short_y(100, 1.0);
    REQUIRE_THROWS_AS(CubicSpline(g, short_y), std::invalid_argument);
}

TEST_CASE("maxwellian-split interpolation flushes the gaussian deviation", "[spectral_core][interp]") {
    const FourierGrid g(257, 32.0);
    const SpectralState f = gaussian_state(g);
    const SplitInterp si(g, f.values);
    REQUIRE(si.mass() == 1.0);
    REQUIRE_THAT(si.temperature(), WithinAbs(1.0, 1e-10));
    REQUIRE(si.dev_at_zero() == 0.0);
    REQUIRE(si.deviation(1.3) == 0.0);
    REQUIRE(si.eval(1.3) == si.maxwellian(1.3));
}

TEST_CASE("maxwellian-split interpolation captures the laplace remainder", "[spectral_core][interp]") {
    const FourierGrid g(257, 32.0);
    const SpectralState f = laplace_state(g);
    const SplitInterp si(g, f.values);
    REQUIRE(si.mass() == 1.0);
    // T = 2 log(1 + h^2) / h^2 with h = 1/8
    REQUIRE_THAT(si.temperature(), WithinRel(128.0 * std::log(65.0 / 64.0), 1e-13));
    const double dev2 = si.deviation(2.0);
    REQUIRE(dev2 > 0.15);
    REQUIRE(dev2 < 0.21);
    // split halves reassemble the sample at a node
    REQUIRE_THAT(si.eval(2.0), WithinAbs(0.2, 1e-15));
}

TEST_CASE("maxwellian-split interpolation falls back to pure spline", "[spectral_core][interp]") {
    const FourierGrid g(65, 8.0);
    const std::vector<double> flat(g.n, 1.0);  // y[1] == y[0]: no temperature
    const SplitInterp si(g, flat);
    REQUIRE(si.mass() == 0.0);
    REQUIRE(si.temperature() == 1.0);
    REQUIRE(si.maxwellian(2.0) == 0.0);
    REQUIRE_THAT(si.eval(2.0), WithinAbs(1.0, 1e-12));
}

TEST_CASE("even interpolant mirrors the half line and guards the extent", "[spectral_core][interp]") {
    const FourierGrid g(257, 32.0);
    const SpectralState f = laplace_state(g);
    const FourierInterpolant F(f);
    REQUIRE(F(-1.3) == F(1.3));
    REQUIRE(F(0.0) == 1.0);
    REQUIRE_THROWS_AS(F(32.0001), std::domain_error);
    REQUIRE_THAT(interp_fourier(f, 2.0), WithinAbs(0.2, 1e-15));
}

// ── Mollifiers ────────────────────────────────────────────────────────────────

TEST_CASE("exponential mollifier matches hand values and saturates", "[spectral_core][mollifier]") {
    ExpMollifierParams p{1.0, 1.0, 0.1};
    // G(1, 0) = 1/(e^{-1} + 0.1) = e/(1 + 0.1 e)
    REQUIRE_THAT(g_delta(1.0, 0.0, p), WithinRel(2.1373027151957631, 1e-15));

    ExpMollifierParams q{0.2, 1.5, 0.125};
    REQUIRE_THAT(g_delta(0.5, 2.0, q), WithinRel(1.1893593506323296, 1e-14));

    // deep saturation: e^{-A} underflows and G hits 1/delta exactly
    REQUIRE(g_delta(200.0, 10.0, q) == 8.0);

    REQUIRE_THROWS_AS(g_delta(-0.1, 0.0, p), std::domain_error);
    REQUIRE_THROWS_AS(g_delta_dt(-0.1, 0.0, p), std::domain_error);
    REQUIRE_THROWS_AS(g_delta_dxi(-0.1, 0.0, p), std::domain_error);
}

TEST_CASE("exponential mollifier parameter domain", "[spectral_core][mollifier]") {
    REQUIRE_THROWS_AS((ExpMollifierParams{0.0, 1.0, 0.5}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((ExpMollifierParams{0.1, 0.0, 0.5}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((ExpMollifierParams{0.1, 2.5, 0.5}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((ExpMollifierParams{0.1, 1.0, 0.0}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((ExpMollifierParams{0.1, 1.0, 1.5}.validate()), std::invalid_argument);
    REQUIRE_NOTHROW((ExpMollifierParams{0.1, 2.0, 1.0}.validate()));
}

TEST_CASE("exponential mollifier derivatives agree with finite differences",
          "[spectral_core][mollifier]") {
    const ExpMollifierParams p{0.3, 1.5, 0.25};
    std::mt19937 rng(271828);
    std::uniform_real_distribution<double> ut(0.05, 2.0), ux(-6.0, 6.0);
    const double st = 1e-3, sx = 1e-3;
    for (int i = 0; i < 200; ++i) {
        const double t = ut(rng), xi = ux(rng);
        // keep the argument away from saturation so differencing stays informative
        if (p.c0 * t * std::pow(1.0 + xi * xi, 0.75) > 8.0) continue;

        const double fd_t = (-g_delta(t + 2 * st, xi, p) + 8 * g_delta(t + st, xi, p)
                             - 8 * g_delta(t - st, xi, p) + g_delta(t - 2 * st, xi, p))
                          / (12 * st);
        REQUIRE_THAT(g_delta_dt(t, xi, p), WithinRel(fd_t, 1e-8));

        const double fd_x = (-g_delta(t, xi + 2 * sx, p) + 8 * g_delta(t, xi + sx, p)
                             - 8 * g_delta(t, xi - sx, p) + g_delta(t, xi - 2 * sx, p))
                          / (12 * sx);
        if (std::abs(fd_x) > 1e-12)
            REQUIRE_THAT(g_delta_dxi(t, xi, p), WithinRel(fd_x, 1e-6));
    }
}

TEST_CASE("polynomial mollifier: window, regularization order, hand value",
          "[spectral_core][mollifier]") {
    PolyMollifierParams p{4.0, 1.0, 0.25};
    REQUIRE(p.N0() == 4.0);

    // M(1/2, 2) = <2>^{N t - 1} / (1 + delta 4)^{N0} = 5^{1/2} / 2^4
    REQUIRE_THAT(m_delta(0.5, 2.0, p), WithinRel(0.13975424859373686, 1e-14));

    REQUIRE_THROWS_AS(m_delta(-0.1, 2.0, p), std::domain_error);
    REQUIRE_THROWS_AS(m_delta(1.5, 2.0, p), std::domain_error);

    REQUIRE_THROWS_AS((PolyMollifierParams{0.0, 1.0, 0.5}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((PolyMollifierParams{4.0, 0.0, 0.5}.validate()), std::invalid_argument);
    REQUIRE_THROWS_AS((PolyMollifierParams{4.0, 1.0, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("polynomial mollifier time derivative is the exact log factor",
          "[spectral_core][mollifier]") {
    const PolyMollifierParams p{3.0, 1.0, 0.5};
    for (double xi : {0.0, 0.7, 2.0, 11.0}) {
        const double expect = p.N * 0.5 * std::log1p(xi * xi) * m_delta(0.4, xi, p);
        REQUIRE_THAT(m_delta_dt(0.4, xi, p), WithinRel(expect, 1e-15));
    }
    REQUIRE(m_delta_dt(0.4, 0.0, p) == 0.0);
}

// ── Norms ─────────────────────────────────────────────────────────────────────

TEST_CASE("half-line integral computes the plancherel L2 norm", "[spectral_core][norms]") {
    const FourierGrid g = standard_grid();
    const SpectralState f = gaussian_state(g);
    std::vector<double> sq(g.n);
    for (std::size_t j = 0; j < g.n; ++j) sq[j] = f.values[j] * f.values[j];
    // (1/pi) int_0^inf e^{-xi^2} dxi = 1/(2 sqrt(pi))
    REQUIRE_THAT(half_line_integral(sq, g.spacing()),
                 WithinAbs(0.28209479177387814, 1e-13));
    REQUIRE_THROWS_AS(half_line_integral({1.0}, 0.1), std::invalid_argument);
}

TEST_CASE("even finite differences are exact on quadratics", "[spectral_core][norms]") {
    const FourierGrid g(65, 8.0);
    const double h = g.spacing();
    std::vector<double> quad(g.n);
    for (std::size_t j = 0; j < g.n; ++j) quad[j] = 3.0 + 2.0 * g.node(j) * g.node(j);
    const std::vector<double> d1 = fd1_even(quad, h);
    const std::vector<double> d2 = fd2_even(quad, h);
    REQUIRE(d1[0] == 0.0);
    for (std::size_t j = 1; j < g.n; ++j)
        REQUIRE_THAT(d1[j], WithinRel(4.0 * g.node(j), 1e-10));
    for (std::size_t j = 0; j < g.n; ++j)
        REQUIRE_THAT(d2[j], WithinRel(4.0, 1e-9));
}

TEST_CASE("five-point energy stencil is fourth-order accurate", "[spectral_core][norms]") {
    const FourierGrid g1(513, 32.0), g2(1025, 32.0);
    const double e1 = energy_fd5(gaussian_state(g1).values, g1.spacing());
    const double e2 = energy_fd5(gaussian_state(g2).values, g2.spacing());
    REQUIRE_THAT(e1, WithinAbs(1.0, 1e-5));
    REQUIRE_THAT(e2, WithinAbs(1.0, 1e-6));
    // halving h shrinks the error sixteenfold
    REQUIRE_THAT(std::abs(e1 - 1.0) / std::abs(e2 - 1.0), WithinAbs(16.0, 2.0));

    const double l1 = energy_fd5(laplace_state(g1).values, g1.spacing());
    REQUIRE_THAT(l1, WithinAbs(2.0, 5e-4));

    REQUIRE_THROWS_AS(energy_fd5({1.0, 0.9}, 0.1), std::invalid_argument);

    const ConservedQuantities cq = conserved_quantities(gaussian_state(g1));
    REQUIRE(cq.mass == 1.0);
    REQUIRE_THAT(l12_norm(gaussian_state(g1)), WithinAbs(2.0, 1e-5));
}

TEST_CASE("weighted norms match closed forms for the gaussian", "[spectral_core][norms]") {
    const FourierGrid g = standard_grid();
    const SpectralState f = gaussian_state(g);

    // ||f||_{L2} = (2 sqrt(pi))^{-1/2}
    REQUIRE_THAT(weighted_norm(f, {0.0, 0}), WithinAbs(0.53112596601359846, 1e-12));

    // H^2 and the second velocity moment share one closed form:
    // (1/pi) int (1+xi^2)^2 e^{-xi^2} dxi = 1.375/sqrt(pi), norm = its root
    REQUIRE_THAT(weighted_norm(f, {2.0, 0}), WithinAbs(0.88077277284108010, 1e-12));
    REQUIRE_THAT(weighted_norm(f, {0.0, 2}), WithinRel(0.88077277284108010, 2e-3));

    // l = 1 sits strictly between the l = 0 and l = 2 norms
    const double n1 = weighted_norm(f, {0.0, 1});
    REQUIRE(n1 > weighted_norm(f, {0.0, 0}));
    REQUIRE(n1 < weighted_norm(f, {0.0, 2}));
}

TEST_CASE("weighted norm specs validate their domain", "[spectral_core][norms]") {
    WeightedNormSpec bad;
    bad.l = 3;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.l = -1;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.l = 0;
    bad.k = -0.5;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("mollified norm at t = 0 is a constant multiple of the plain norm",
          "[spectral_core][norms]") {
    const FourierGrid g = standard_grid();
    const SpectralState f = laplace_state(g);

    WeightedNormSpec spec;
    spec.weight = WeightKind::exp_mollifier;
    spec.exp_params = {0.1, 1.0, 0.0625};
    spec.t = 0.0;  // G(0, xi) = 1/(1 + delta) independent of xi

    const double plain = weighted_norm(f, {0.0, 0});
    REQUIRE_THAT(weighted_norm(f, spec), WithinRel(plain / 1.0625, 1e-12));
}
