#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tanhflow/parallel.hpp"
#include "tanhflow/wronskian.hpp"

using namespace tanhflow;

namespace {
constexpr double kPi = std::numbers::pi;

Phi1Field solve_at(cplx c, int alpha, double alpha_h = 0.025) {
    SpectralPoint p = make_spectral_point(c, alpha);
    Grid g = default_grid(p, alpha_h);
    return solve_phi1(p, g);
}

// pseudo-random point strictly inside O
cplx random_O_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ucr(-0.9, 0.9), ufr(0.1, 0.9);
    std::bernoulli_distribution sgn;
    double cr = ucr(rng);
    double lim = std::min((1.0 - cr * cr) / 8.0, 0.25);
    return {cr, (sgn(rng) ? 1.0 : -1.0) * ufr(rng) * lim};
}
}  // namespace

TEST_CASE("W1(0,1) = 0 and W1(0,2) stays away from zero") {
    Phi1Field f1 = solve_at({0.0, 0.0}, 1);
    CHECK(std::abs(w1(f1)) < 1e-6);
    CHECK(std::abs(a_of(f1)) < 1e-6);
    Phi1Field f2 = solve_at({0.0, 0.0}, 2);
    CHECK(std::abs(w1(f2)) > 0.1);
    // computed value is -3 to quadrature accuracy; freeze it as a regression
    CHECK(w1(f2).real() == doctest::Approx(-3.0).epsilon(1e-7));
}

TEST_CASE("W1 is real for real c") {
    Phi1Field f = solve_at({0.45, 0.0}, 2);
    CHECK(std::abs(w1(f).imag()) < 1e-12);
}

TEST_CASE("dual Wronskian formulas at pseudo-random O points") {
    std::mt19937_64 rng(7);
    std::vector<cplx> pts;
    std::vector<int> alphas;
    for (int k = 0; k < 8; ++k) {
        pts.push_back(random_O_point(rng));
        alphas.push_back(1 + k % 3);
    }
    std::vector<double> rel(pts.size());
    parallel_for(pts.size(), [&](std::size_t k) {
        Phi1Field f = solve_at(pts[k], alphas[k]);
        cplx wd = wronskian_direct(f);
        cplx ww = wronskian_via_w1(f);
        rel[k] = std::abs(wd - ww) / std::abs(wd);
    });
    for (size_t k = 0; k < pts.size(); ++k) {
        INFO("point ", pts[k].real(), "+", pts[k].imag(), "i alpha ", alphas[k]);
        CHECK(rel[k] < 1e-6);
    }
}

TEST_CASE("conjugation symmetry W(conj c) = conj W(c)") {
    cplx c(0.3, 0.05);
    Phi1Field fp = solve_at(c, 2);
    Phi1Field fm = solve_at(std::conj(c), 2);
    cplx wp = wronskian_direct(fp), wm = wronskian_direct(fm);
    CHECK(std::abs(wm - std::conj(wp)) / std::abs(wp) < 1e-10);
    CHECK(std::abs(wp) > 0.0);  // nonvanishing in O
}

TEST_CASE("wronskian_direct requires Im c != 0; via_w1 needs a side on the cut") {
    Phi1Field f = solve_at({0.3, 0.0}, 1);
    CHECK_THROWS_AS(wronskian_direct(f), std::invalid_argument);
    CHECK_THROWS_AS(wronskian_via_w1(f), std::invalid_argument);
    // one-sided limits W_pm = (1-c^2)^{-2} (A +- 2 pi c i)
    double c = 0.3;
    double A = a_of(f);
    cplx wplus = wronskian_via_w1(f, Side::plus);
    cplx expect = (A + cplx(0.0, 2.0 * kPi * c)) / std::pow(1.0 - c * c, 2);
    CHECK(std::abs(wplus - expect) / std::abs(expect) < 1e-9);
    cplx wminus = wronskian_via_w1(f, Side::minus);
    CHECK(std::abs(wminus - std::conj(wplus)) < 1e-12);
}

TEST_CASE("principal log branch jumps by 2 pi i across the cut near c = 0") {
    for (double eps : {1e-3, 1e-6}) {
        cplx above = std::log((cplx(0.0, eps) - 1.0) / (cplx(0.0, eps) + 1.0));
        cplx below = std::log((cplx(0.0, -eps) - 1.0) / (cplx(0.0, -eps) + 1.0));
        CHECK(above.imag() == doctest::Approx(kPi).epsilon(1e-2));
        CHECK(below.imag() == doctest::Approx(-kPi).epsilon(1e-2));
    }
}

TEST_CASE("Wronskian limit W(i eps, 1)/(i eps) -> 2 pi i") {
    WronskianLimitDiagnostics d = wronskian_limit_check({1e-1, 1e-2, 1e-3});
    // error decreases along the path
    const cplx target(0.0, 2.0 * kPi);
    double e0 = std::abs(d.ratio[0] - target);
    double e2 = std::abs(d.ratio[2] - target);
    CHECK(e2 < e0);
    CHECK(d.rel_error_raw < 5e-2);  // the 5% check at eps = 1e-3
    CHECK(d.rel_error_extrapolated < 1e-2);
}

TEST_CASE("A(0,1) and its c-derivative vanish") {
    AEvaluator a(1);
    CHECK(std::abs(a.A(0.0)) < 1e-6);
    CHECK(std::abs(a.dA(0.0)) < 1e-5);
}

TEST_CASE("consistency: a_of equals w1 + 2c log((1-c)/(1+c))") {
    for (double c : {-0.9, -0.4, 0.1, 0.62, 0.9}) {
        Phi1Field f = solve_at({c, 0.0}, 2);
        double lhs = a_of(f);
        double rhs = w1(f).real() + 2.0 * c * std::log((1.0 - c) / (1.0 + c));
        CHECK(std::abs(lhs - rhs) < 1e-6);
    }
}

TEST_CASE("A(c,2)^2 + 4 pi^2 c^2 lower bound on a 101-point grid") {
    const int n = 101;
    std::vector<double> val(n);
    parallel_for(n, [&](std::size_t k) {
        double c = -0.98 + 1.96 * double(k) / (n - 1);
        Phi1Field f = solve_at({c, 0.0}, 2, 0.05);
        double A = a_of(f);
        val[k] = A * A + 4.0 * kPi * kPi * c * c;
    });
    for (double v : val) CHECK(v >= 0.5);
}

TEST_CASE("A tilde quantities near zero") {
    AEvaluator a(1);
    CHECK(a.A_tilde(0.0) == 0.0);
    // c A~(c) = A(c) identically beyond the switchover
    for (double c : {0.06, 0.1, -0.09}) {
        CHECK(c * a.A_tilde(c) == doctest::Approx(a.A(c)).epsilon(1e-12));
        CHECK(c * c * a.A_ttilde(c) == doctest::Approx(a.A(c)).epsilon(1e-12));
    }
    // switchover consistency: derivative-average branch vs the exact
    // quotient, both evaluated just inside the switch
    double avg = a.A_tilde(0.0499);
    double quot = a.A(0.0499) / 0.0499;
    CHECK(std::abs(avg - quot) < 1e-5);
    // A~(c)^2 + 4 pi^2 >= 1 on a c-grid
    for (int k = 0; k <= 20; ++k) {
        double c = -0.9 + 1.8 * k / 20.0;
        double at = a.A_tilde(c);
        CHECK(at * at + 4.0 * kPi * kPi >= 1.0);
    }
}

TEST_CASE("dA/dc is bounded and stable under grid refinement") {
    SolveParams coarse, fine;
    coarse.alpha_h = 0.05;
    fine.alpha_h = 0.025;
    AEvaluator ac(1, coarse), af(1, fine);
    for (double c : {-0.5, 0.0, 0.35}) {
        double dc = ac.dA(c), dfv = af.dA(c);
        CHECK(std::isfinite(dc));
        CHECK(std::abs(dc) < 10.0);
        CHECK(std::abs(dc - dfv) < 1e-4);
    }
}

TEST_CASE("a_of rejects complex c and |c| near 1") {
    Phi1Field f = solve_at({0.3, 0.02}, 1);
    CHECK_THROWS_AS(a_of(f), std::invalid_argument);
}
