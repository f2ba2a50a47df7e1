#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tanhflow/flow.hpp"

using namespace tanhflow;

TEST_CASE("eval_flow at the origin") {
    FlowSample s = eval_flow(0.0);
    CHECK(s.u == 0.0);
    CHECK(s.du == 1.0);
    CHECK(s.d2u == 0.0);
    CHECK(s.d3u == -2.0);
}

TEST_CASE("eval_flow at y=1 against the high-precision oracle") {
    FlowSample s = eval_flow(1.0);
    CHECK(s.u == doctest::Approx(0.7615941559557649).epsilon(1e-14));
    CHECK(s.du == doctest::Approx(0.4199743416140261).epsilon(1e-14));
    CHECK(s.d2u == doctest::Approx(-0.6397000084492245).epsilon(1e-14));
    CHECK(s.d3u == doctest::Approx(0.6216266807712963).epsilon(1e-14));
    // live oracle cross-check
    oracle::FlowLD ld = oracle::flow_ld(1.0L);
    CHECK(s.d3u == doctest::Approx(double(ld.d3u)).epsilon(1e-14));
}

TEST_CASE("parity: u odd, u' even") {
    FlowSample p = eval_flow(1.0), m = eval_flow(-1.0);
    CHECK(m.u == -p.u);
    CHECK(m.du == p.du);
    CHECK(m.d2u == -p.d2u);
    CHECK(m.d3u == p.d3u);
}

TEST_CASE("eval_flow rejects non-finite input") {
    CHECK_THROWS_AS(eval_flow(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(eval_flow(INFINITY), std::invalid_argument);
}

TEST_CASE("flow identities on random y (seeded)") {
    for (unsigned seed : {1u, 2u, 3u}) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uy(-30.0, 30.0);
        for (int k = 0; k < 10000; ++k) {
            FlowSample s = eval_flow(uy(rng));
            CHECK(std::abs(s.du - (1.0 - s.u * s.u)) < 1e-13);
            CHECK(std::abs(s.d2u + 2.0 * s.u * s.du) < 1e-13);
        }
    }
}

TEST_CASE("critical point: atanh round trip and oddness") {
    CHECK(critical_point(0.0) == 0.0);
    CHECK(critical_point(0.5) == doctest::Approx(0.5493061443340548).epsilon(1e-14));
    CHECK(critical_point(-0.5) == -critical_point(0.5));
    for (double c : {0.1, 0.35, 0.77, 0.99, -0.6}) {
        CHECK(std::abs(std::tanh(critical_point(c)) - c) < 1e-14);
    }
    CHECK_THROWS_AS(critical_point(1.0), std::invalid_argument);
    CHECK_THROWS_AS(critical_point(-1.2), std::invalid_argument);
    CHECK_THROWS_AS(critical_point(1.0 - 1e-16), std::invalid_argument);
}

TEST_CASE("critical point by bisection cross-check") {
    for (double c : {0.5, -0.25, 0.9}) {
        double lo = -25, hi = 25;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (std::tanh(mid) < c ? lo : hi) = mid;
        }
        CHECK(critical_point(c) == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-12));
    }
}

TEST_CASE("domain membership O and its closure") {
    CHECK(in_domain_O({0.5, 0.01}, 1, 0.25, 8.0));          // 0.01 < min(0.09375, 0.25)
    CHECK_FALSE(in_domain_O({0.99, 0.1}, 1, 0.25, 8.0));    // 0.1 > (1-0.9801)/8
    CHECK_FALSE(in_domain_O({0.3, 0.0}, 1, 0.25, 8.0));     // open set excludes reals
    CHECK(in_domain_O({0.3, 0.0}, 1, 0.25, 8.0, true));     // closure contains (-1,1)
    CHECK_FALSE(in_domain_O({1.0, 0.0}, 1, 0.25, 8.0, true));
    CHECK_FALSE(in_domain_O({0.0, 0.3}, 1, 0.25, 8.0));     // 0.3 > eps0
}

TEST_CASE("u'(y_c) - u'(y) = (u+c)(u-c) pointwise") {
    for (unsigned seed : {1u, 2u, 3u}) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uy(-8.0, 8.0), uc(-0.99, 0.99);
        for (int k = 0; k < 2000; ++k) {
            double c = uc(rng), y = uy(rng);
            FlowSample s = eval_flow(y);
            double lhs = (1.0 - c * c) - s.du;
            double rhs = (s.u + c) * (s.u - c);
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("|u(y)-c| sinh identity") {
    for (unsigned seed : {1u, 2u, 3u}) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uy(-8.0, 8.0), uc(-0.95, 0.95);
        for (int k = 0; k < 2000; ++k) {
            double c = uc(rng), y = uy(rng);
            double y_c = critical_point(c);
            double lhs = std::abs(std::tanh(y) - c);
            double rhs = std::sinh(std::abs(y - y_c)) / (std::cosh(y) * std::cosh(y_c));
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("spectral point construction validates the domain") {
    SpectralPoint p = make_spectral_point({0.5, 0.01}, 2);
    CHECK(p.y_c == doctest::Approx(critical_point(0.5)));
    CHECK_THROWS_AS(make_spectral_point({0.99, 0.1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_spectral_point({1.5, 0.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_spectral_point({0.0, 0.0}, 0), std::invalid_argument);
}

TEST_CASE("UMinusC matches the naive difference away from y_c") {
    SpectralPoint p = make_spectral_point({0.3, 0.05}, 1);
    UMinusC D(p);
    for (double y : {-3.0, 0.0, 0.29, 2.0}) {
        cplx naive = std::tanh(y) - p.c;
        CHECK(std::abs(D(y) - naive) < 1e-14);
    }
}
