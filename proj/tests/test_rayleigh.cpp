#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tanhflow/rayleigh.hpp"

using namespace tanhflow;

namespace {
Phi1Field solve_at(cplx c, int alpha, double alpha_h = 0.025) {
    SpectralPoint p = make_spectral_point(c, alpha);
    Grid g = default_grid(p, alpha_h);
    return solve_phi1(p, g);
}
}  // namespace

TEST_CASE("apply_T: linearity zero and vanishing at y_c") {
    SpectralPoint p = make_spectral_point({0.0, 0.0}, 1);
    Grid g = default_grid(p);
    std::vector<cplx> zero(g.size(), 0.0), one(g.size(), 1.0);
    auto Tz = apply_T(zero, p, g);
    for (cplx v : Tz) CHECK(std::abs(v) == 0.0);

    auto T1 = apply_T(one, p, g);
    // (T1)(y)/y^2 -> 1/6 as y -> 0
    int i0 = g.cell(0.0);
    for (int i : {i0 - 2, i0 + 2, i0 + 5}) {
        double y = g.y(i);
        if (std::abs(y) < 1e-12) continue;
        CHECK(T1[i].real() / (y * y) == doctest::Approx(1.0 / 6.0).epsilon(5e-3));
    }
    // richer check: the ratio is even in y, so (4 r2 - r1)/3 removes the
    // quadratic correction
    double r1 = T1[i0 + 4].real() / (g.y(i0 + 4) * g.y(i0 + 4));
    double r2 = T1[i0 + 2].real() / (g.y(i0 + 2) * g.y(i0 + 2));
    CHECK(std::abs((4 * r2 - r1) / 3 - 1.0 / 6.0) < 1e-5);
    // exact zero at the critical point
    CHECK(std::abs(T1[i0]) < 1e-14);
}

TEST_CASE("apply_T rejects bad input") {
    SpectralPoint p = make_spectral_point({0.0, 0.0}, 1);
    Grid g = default_grid(p);
    std::vector<cplx> f(g.size(), 1.0);
    f[3] = std::nan("");
    CHECK_THROWS_AS(apply_T(f, p, g), std::invalid_argument);
    Grid off(30.0, 0.025, 2001);  // does not cover y_c = 0
    CHECK_THROWS_AS(apply_T(std::vector<cplx>(off.size(), 1.0), p, off),
                    std::invalid_argument);
}

TEST_CASE("solve_phi1: interior conditions at y_c") {
    for (double c : {0.0, 0.4, -0.7}) {
        Phi1Field f = solve_at({c, 0.0}, 1);
        CHECK(std::abs(f.phi1_at(f.point.y_c) - 1.0) < 1e-9);
        CHECK(std::abs(f.dphi1_at(f.point.y_c)) < 1e-9);
    }
}

TEST_CASE("solve_phi1 at c=0, alpha=1 matches the closed form") {
    Phi1Field f = solve_at({0.0, 0.0}, 1);
    CHECK(f.phi1_at(1.0).real() == doctest::Approx(1.1969993815272827).epsilon(1e-8));
    auto [phi, dphi] = phi_hom(f, 1.0);
    CHECK(phi.real() == doctest::Approx(0.9116277336538434).epsilon(1e-8));
    // max relative error of phi against (sinh y + y/cosh y)/2 on [-5, 5]
    double worst = 0;
    for (int k = 0; k <= 200; ++k) {
        double y = -5.0 + 10.0 * k / 200.0;
        double ref = 0.5 * (std::sinh(y) + y / std::cosh(y));
        double val = phi_hom(f, y).first.real();
        if (std::abs(y) > 1e-9) worst = std::max(worst, std::abs(val - ref) / std::abs(ref));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("phi1(y,0) is even, phi(y,0) odd") {
    Phi1Field f = solve_at({0.0, 0.0}, 1);
    for (double y : {0.5, 1.7, 4.0, 11.0}) {
        CHECK(f.phi1_at(y).real() ==
              doctest::Approx(f.phi1_at(-y).real()).epsilon(1e-9));
        CHECK(phi_hom(f, y).first.real() ==
              doctest::Approx(-phi_hom(f, -y).first.real()).epsilon(1e-10));
    }
    // phi vanishes at y_c for real c
    Phi1Field f2 = solve_at({0.3, 0.0}, 2);
    CHECK(std::abs(phi_hom(f2, f2.point.y_c).first) < 1e-12);
}

TEST_CASE("solve_phi1 against the shooting oracle") {
    for (auto [c, alpha] : std::vector<std::pair<double, int>>{{0.0, 1}, {0.3, 2}}) {
        Phi1Field f = solve_at({c, 0.0}, alpha);
        double y_c = f.point.y_c;
        std::vector<double> targets = {y_c + 1.0, y_c + 3.0, y_c - 2.0};
        std::vector<double> ref = oracle::shoot_phi1(c, alpha, targets);
        for (size_t k = 0; k < targets.size(); ++k) {
            CHECK(f.phi1_at(targets[k]).real() ==
                  doctest::Approx(ref[k]).epsilon(1e-8));
        }
    }
}

TEST_CASE("ode_residual: constant field violates by alpha^2, converged field small") {
    SpectralPoint p = make_spectral_point({0.0, 0.0}, 2);
    Grid g = default_grid(p);
    Phi1Field fake;
    fake.point = p;
    fake.grid = g;
    fake.phi1.assign(g.size(), 1.0);
    fake.dphi1.assign(g.size(), 0.0);
    fake.tphi.assign(g.size(), 0.0);
    CHECK(ode_residual(fake) == doctest::Approx(4.0).epsilon(1e-12));

    // converged field on a fine grid: residual < 1e-6, and decreases under
    // refinement at the order of the second-difference truncation
    SpectralPoint p1 = make_spectral_point({0.0, 0.0}, 1);
    Grid ga = default_grid(p1, 0.004);
    Grid gb = default_grid(p1, 0.002);
    double ra = ode_residual(solve_phi1(p1, ga));
    double rb = ode_residual(solve_phi1(p1, gb));
    CHECK(rb < 1e-6);
    CHECK(ra / rb > 2.5);  // ~4x expected for an O(h^2) diagnostic
    CHECK(ra / rb < 7.0);
}

TEST_CASE("Picard monotonicity and bounds on random points (3 seeds)") {
    for (unsigned seed : {1u, 2u, 3u}) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uc(-0.9, 0.9);
        std::uniform_int_distribution<int> ua(1, 3);
        for (int k = 0; k < 6; ++k) {
            double c = uc(rng);
            int alpha = ua(rng);
            Phi1Field f = solve_at({c, 0.0}, alpha, 0.05);
            const Grid& g = f.grid;
            double y_c = f.point.y_c;
            double prev_lo = 1.0, prev_hi = 1.0;
            int jc = g.cell(y_c);
            for (int i = jc + 1; i < g.size(); ++i) {
                double v = f.phi1[i].real();
                double dy = g.y(i) - y_c;
                CHECK(v >= prev_hi - 1e-12);          // nondecreasing away from y_c
                CHECK(v >= 1.0 - 1e-12);              // phi1 >= 1
                CHECK(v <= std::exp(alpha * dy) * (1 + 1e-9));  // upper envelope
                // 0 <= phi1 - 1 <= alpha^2 (y-y_c)^2 phi1 / 2
                CHECK(v - 1.0 <= 0.5 * alpha * alpha * dy * dy * v + 1e-12);
                // 0 <= (y-y_c) phi1' <= alpha^2 (y-y_c)^2 phi1
                double dv = f.dphi1[i].real();
                CHECK(dy * dv >= -1e-10);
                CHECK(dy * dv <= alpha * alpha * dy * dy * v + 1e-10);
                prev_hi = v;
            }
            for (int i = jc; i >= 0; --i) {
                double v = f.phi1[i].real();
                CHECK(v >= prev_lo - 1e-12);
                prev_lo = std::max(prev_lo, v);
            }
        }
    }
}

TEST_CASE("Picard updates contract geometrically in the tail") {
    Phi1Field f = solve_at({0.2, 0.0}, 1);
    const auto& hist = f.update_history;
    REQUIRE(hist.size() >= 8);
    for (size_t k = hist.size() - 4; k < hist.size(); ++k)
        CHECK(hist[k] < 0.5 * hist[k - 1]);
}

TEST_CASE("complex-perturbation continuity at c=0.3") {
    Phi1Field f0 = solve_at({0.3, 0.0}, 1);
    double err_prev = -1.0;
    for (double eps : {1e-2, 1e-3}) {
        SpectralPoint p = make_spectral_point({0.3, eps}, 1);
        Phi1Field f = solve_phi1(p, f0.grid);
        double worst = 0;
        for (int i = 0; i < f.grid.size(); ++i) {
            double ratio = std::abs(f.phi1[i] / f0.phi1[i]);
            CHECK(ratio >= 0.5);
            CHECK(ratio <= 1.5);
            worst = std::max(worst, std::abs(f.phi1[i] / f0.phi1[i] - 1.0));
        }
        if (err_prev > 0) {
            double shrink = err_prev / worst;
            CHECK(shrink > 5.0);   // ~linear in eps over one decade
            CHECK(shrink < 20.0);
        }
        err_prev = worst;
    }
}

TEST_CASE("apply_T agrees with the solver's cumulative path") {
    // T applied to the converged phi1 must reproduce (phi1-1)/alpha^2.  At
    // complex c the fixed-order kernel quadrature resolves the Im(c)-scale
    // structure only approximately, so that case gets a looser gate.
    for (cplx c : {cplx(0.25, 0.0), cplx(-0.4, 0.06)}) {
        Phi1Field f = solve_at(c, 2, 0.05);
        std::vector<cplx> T = apply_T(f.phi1, f.point, f.grid);
        double worst = 0;
        for (int i = 0; i < f.grid.size(); ++i) {
            if (std::abs(f.grid.y(i) - f.point.y_c) > 8.0) continue;  // keep scales tame
            worst = std::max(worst, std::abs(T[i] - f.tphi[i]) /
                                        std::max(1.0, std::abs(f.tphi[i])));
        }
        CHECK(worst < (c.imag() == 0.0 ? 1e-8 : 2e-5));
    }
}

TEST_CASE("solver guards: grid span, tolerance, overflow") {
    SpectralPoint p = make_spectral_point({0.0, 0.0}, 1);
    Grid narrow = Grid::around(0.0, 10.0, 0.025);  // < 25/alpha half-width
    CHECK_THROWS_AS(solve_phi1(p, narrow), std::invalid_argument);
    Grid g = default_grid(p);
    CHECK_THROWS_AS(solve_phi1(p, g, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_phi1(p, g, 1e-10, 2), std::runtime_error);  // non-convergence
    SpectralPoint p40 = make_spectral_point({0.0, 0.0}, 40);
    Grid wide = Grid::around(0.0, 25.0, 0.000625);
    CHECK_THROWS_AS(solve_phi1(p40, wide), std::invalid_argument);  // e^{alpha L} overflow
}

TEST_CASE("phi_hom refuses extrapolation") {
    Phi1Field f = solve_at({0.0, 0.0}, 1);
    CHECK_THROWS_AS(phi_hom(f, f.grid.ymax() + 1.0), std::invalid_argument);
}
