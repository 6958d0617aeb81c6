#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "sldual/apriori.hpp"

using namespace sldual;

namespace {

CoefficientBounds test_one_bounds() {
    CoefficientBounds b;
    b.drift = 1.2;
    b.vol = 1.0;
    b.log_drift = 0.88;
    return b;
}

}  // namespace

TEST_SUITE("apriori") {

TEST_CASE("constants for the Merton test") {
    const ConstantSet k(1.2, 1.0, 0.5, 4);
    CHECK(k.k1() == doctest::Approx(1.72).epsilon(1e-12));
    CHECK(k.k2(0.5) == doctest::Approx(1.44 * 0.5 + 4.0).epsilon(1e-12));
    const double k2t = 4.72;
    CHECK(k.k3(1.0) == doctest::Approx(3.0 * (1.0 + 2.0 * k2t * 0.5) * std::exp(6.0 * k2t * 0.5)).epsilon(1e-12));
    CHECK(k.k4() == doctest::Approx(2 * 4 * 1.2 * 256 + 4 * 7 * 1.44 * 64).epsilon(1e-12));
    CHECK(k.k5() == doctest::Approx(10.26).epsilon(1e-3));
    // monotonicity
    CHECK(k.k2(0.1) < k.k2(0.2));
    CHECK(k.k3(0.5) < k.k3(-1.0));
    CHECK(k.k3(1.0) == k.k3(-1.0));
}

TEST_CASE("Euler-Maruyama bound") {
    const CoefficientBounds b = test_one_bounds();
    for (double h : {1.0 / 8, 1.0 / 64, 1.0 / 512}) {
        CHECK(em_bound(h, 1.0, 3.0, b, 0.5) == doctest::Approx(141.8 * std::sqrt(h)).epsilon(0.01));
    }
    CHECK(em_bound(0.1, 0.0, 3.0, b, 0.5) == 0.0);
    const double q = em_bound(0.04, 1.3, 3.0, b, 0.5);
    CHECK(em_bound(0.01, 1.3, 3.0, b, 0.5) == doctest::Approx(0.5 * q).epsilon(1e-12));
    CHECK(em_bound(0.1, 1.0, 3.0, b, 0.5, EmVariant::general) > 0.0);
}

TEST_CASE("Gauss-Hermite bound") {
    const CoefficientBounds b = test_one_bounds();
    const QuadratureRule r4 = gauss_hermite_rule(4);
    for (double h : {1.0 / 8, 1.0 / 64, 1.0 / 512}) {
        CHECK(gh_bound(h, 1.0, 4, 3.0, b, 0.5, r4) == doctest::Approx(25.2 * std::pow(h, 3.0 / 8.0)).epsilon(0.01));
    }
    CHECK_THROWS_AS((void)gh_bound(0.1, 1.0, 3, 3.0, b, 0.5, r4), std::invalid_argument);

    // M = 2: defect 2, so the moment factor is 3 + 2
    const QuadratureRule r2 = gauss_hermite_rule(2);
    const double k5 = ConstantSet(b, 0.5, 2).k5();
    const double h = 0.01;
    const double expected = 3.0 * k5 * std::pow(h, 0.25) * (8.0 / 24.0) * 1.0 * 5.0 * (1.0 + std::pow(1.5, 4));
    CHECK(gh_bound(h, 1.5, 2, 3.0, b, 0.5, r2) == doctest::Approx(expected).epsilon(1e-12));
    // x = 0 leaves the factor 1
    CHECK(gh_bound(h, 0.0, 2, 3.0, b, 0.5, r2) == doctest::Approx(expected / (1.0 + std::pow(1.5, 4))).epsilon(1e-12));
    CHECK(gh_bound(h, 1.0, 4, 3.0, b, 0.5, r4, GhMoment::full) > gh_bound(h, 1.0, 4, 3.0, b, 0.5, r4));
}

TEST_CASE("a priori bounds grow with h, x and L") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const QuadratureRule rule = gauss_hermite_rule(4);
    for (int trial = 0; trial < 200; ++trial) {
        CoefficientBounds b;
        b.drift = 2.0 * u(gen);
        b.vol = 0.1 + u(gen);
        const double T = 0.1 + u(gen);
        const double h = 0.001 + 0.1 * u(gen);
        const double x = 0.1 + 3.0 * u(gen);
        const double L = 0.1 + 5.0 * u(gen);
        for (EmVariant v : {EmVariant::multiplicative, EmVariant::general}) {
            const double e = em_bound(h, x, L, b, T, v);
            CHECK(em_bound(1.5 * h, x, L, b, T, v) >= e);
            CHECK(em_bound(h, 1.5 * x, L, b, T, v) >= e);
            CHECK(em_bound(h, x, 1.5 * L, b, T, v) >= e);
        }
        const double g = gh_bound(h, x, 4, L, b, T, rule);
        CHECK(gh_bound(1.5 * h, x, 4, L, b, T, rule) >= g);
        CHECK(gh_bound(h, 1.5 * x, 4, L, b, T, rule) >= g);
        CHECK(gh_bound(h, x, 4, 1.5 * L, b, T, rule) >= g);
    }
}

TEST_CASE("large-deviation tails") {
    const TailBounds t = tail_bounds(1.0, std::exp(2.0), 1.0, 0.0, 1.0, 0.5);
    CHECK(t.upper_tail == doctest::Approx(2.0 * std::exp(-3.0)).epsilon(1e-14));
    const TailBounds flat = tail_bounds(2.0, 2.0, 1.0, 0.0, 1.0, 0.5);
    CHECK(flat.upper_tail == 1.0);
    const TailBounds far = tail_bounds(1.0, 1e8, 1.0, 0.1, 1.0, 0.5);
    CHECK(far.upper_tail < 1e-30);
    CHECK(tail_bounds(1.0, 1e8, 1.0, 0.1, 1.0, 0.5).lower_tail < 1e-30);
    // starting below the lower threshold makes the lower tail vacuous
    CHECK(tail_bounds(0.01, 18.0, 8.0, 0.1, 1.0, 0.5).lower_tail == 1.0);
    CHECK(tail_bounds(4.0, 18.0, 8.0, 0.0, 1.0, 0.5).lower_tail ==
          doctest::Approx(2.0 * std::exp(-0.75 * std::pow(std::log(9.0), 2))).epsilon(1e-14));
    // clamp: a large raw value still reports at most 1
    CHECK(tail_bounds(1.0, 1.2, 1.0, 0.0, 1.0, 0.5).upper_tail == 1.0);
}

TEST_CASE("tail allowance") {
    const Utility u = lipschitz_truncate(power_utility(0.5), 18.0, 8.0);
    const CoefficientBounds b = coefficient_bounds(merton_model({}));
    // near 0 the lower tail is vacuous and delta is U(c0/rho)
    CHECK(delta_allowance(1e-9, 18.0, 8.0, b, 0.5, u) == doctest::Approx(2.0 * std::sqrt(8.0 / 18.0)).epsilon(1e-9));
    // nonincreasing in rho for x >= c0
    double prev = INFINITY;
    for (double rho = 20.0; rho <= 200.0; rho += 10.0) {
        const double d = delta_allowance(8.0, rho, 8.0, b, 0.5, power_utility(0.5));
        CHECK(d <= prev + 1e-15);
        prev = d;
    }
    CHECK(delta_allowance(1.0, 18.0, 8.0, merton_model({}), u) ==
          delta_allowance(1.0, 18.0, 8.0, b, 0.5, u));
    const double d1 = delta_allowance(1.0, 18.0, 8.0, b, 0.5, u);
    CHECK(std::isfinite(d1));
    CHECK(d1 > 0.0);
}

TEST_CASE("default a posteriori constants") {
    const Utility u = lipschitz_truncate(power_utility(0.5), 18.0, 8.0);
    const QuadratureRule rule = gauss_hermite_rule(4);
    const BoundConstants c = default_bound_constants(merton_model({}), u, rule, 1.0 / 16, 0.1);
    CHECK(c.lipschitz == doctest::Approx(3.0));
    CHECK(c.lipschitz_dual == 18.0);
    CHECK(c.order == 4);
    CHECK(c.c > 0.0);
    CHECK(c.c_dual > 0.0);
    CHECK(c.h == 1.0 / 16);
    CHECK(c.dx == 0.1);
    CHECK(scheme_constant(test_one_bounds(), 0.5, rule) > 0.5);
}

}
