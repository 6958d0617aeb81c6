#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sldual/error.hpp"
#include "sldual/utility.hpp"

using namespace sldual;

namespace {

std::vector<double> uniform(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
    return out;
}

}  // namespace

TEST_SUITE("utility") {

TEST_CASE("power utility values") {
    const Utility u = power_utility(0.5);
    CHECK(u(1.0) == doctest::Approx(2.0));
    CHECK(u(4.0) == doctest::Approx(4.0));
    CHECK(u(0.0) == 0.0);
    CHECK(u.derivative(4.0) == doctest::Approx(0.5));
    CHECK(u.kind() == UtilityKind::power);
    CHECK_THROWS_AS((void)power_utility(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)power_utility(1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)u.lipschitz(), Unsupported);
}

TEST_CASE("truncation of the square-root utility") {
    const Utility u = lipschitz_truncate(power_utility(0.5), 18.0, 8.0);
    REQUIRE(u.truncation());
    CHECK(u.truncation()->x_rho == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
    CHECK(u.lipschitz() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(u(20.0) == doctest::Approx(2.0 * std::sqrt(18.0)).epsilon(1e-14));
    CHECK(u(0.0) == 0.0);
    CHECK(u.plateau() == doctest::Approx(8.48528137423857).epsilon(1e-12));
    // linear piece, original piece
    CHECK(u(0.2) == doctest::Approx(0.6));
    CHECK(u(4.0) == doctest::Approx(4.0));
    CHECK(u.kind() == UtilityKind::truncated_power);
}

TEST_CASE("truncation preconditions") {
    const Utility p = power_utility(0.5);
    CHECK_THROWS_AS((void)lipschitz_truncate(p, 0.0, 8.0), std::invalid_argument);
    CHECK_THROWS_AS((void)lipschitz_truncate(p, 2.0, 8.0), std::invalid_argument);  // x_rho = 4 >= 2
    const Utility log_u([](double x) { return std::log(x); }, [](double x) { return 1.0 / x; }, "log");
    CHECK_THROWS_AS((void)lipschitz_truncate(log_u, 18.0, 8.0), Unsupported);
}

TEST_CASE("truncated utility is nondecreasing and concave on a grid") {
    const Utility u = lipschitz_truncate(power_utility(0.5), 18.0, 8.0);
    const auto xs = uniform(0.0, 25.0, 5001);
    double prev_slope = INFINITY;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double slope = (u(xs[i]) - u(xs[i - 1])) / (xs[i] - xs[i - 1]);
        CHECK(slope >= -1e-12);
        CHECK(slope <= prev_slope + 1e-9);
        prev_slope = slope;
    }
}

TEST_CASE("truncation increases towards the original utility") {
    const Utility base = power_utility(0.5);
    const Utility u1 = lipschitz_truncate(base, 10.0, 8.0);
    const Utility u2 = lipschitz_truncate(base, 18.0, 8.0);
    for (double x : uniform(0.0, 30.0, 601)) {
        CHECK(u1(x) <= u2(x) + 1e-12);
        CHECK(u2(x) <= base(x) + 1e-12);
    }
}

TEST_CASE("grid conjugate of the power utility") {
    const Utility u = power_utility(0.5);
    const auto grid = uniform(0.0, 20.0, 200001);
    CHECK(convex_conjugate(u, 2.0, grid) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(convex_conjugate(u, 1.0, grid) == doctest::Approx(1.0).epsilon(1e-9));
    // against the brute-force oracle with spacing 1e-4
    const auto f = [&](double x) { return u(x); };
    CHECK(convex_conjugate(u, 2.0, grid) ==
          doctest::Approx(oracle::brute_conjugate(f, 2.0, 20.0, 1e-4)).epsilon(1e-7));
    CHECK_THROWS_AS((void)convex_conjugate(u, 1.0, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("conjugate of the truncated utility") {
    const Utility u = lipschitz_truncate(power_utility(0.5), 18.0, 8.0);
    const ConjugateUtility c = conjugate_spec(u);
    CHECK(c.lipschitz() == 18.0);
    CHECK(c.support_cutoff() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(c(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c(3.5) == 0.0);
    CHECK(c(3.0) == 0.0);
    CHECK(c(0.0) == doctest::Approx(2.0 * std::sqrt(18.0)).epsilon(1e-14));
    CHECK(c(1e-9) == doctest::Approx(2.0 * std::sqrt(18.0)).epsilon(1e-8));
    CHECK_THROWS_AS((void)conjugate_spec(power_utility(0.5)), Unsupported);
    CHECK_THROWS_AS((void)c(-1.0), std::invalid_argument);

    // every branch against a brute-force sup over x; the mesh misses a kink
    // maximiser by at most spacing (L + y)
    const auto f = [&](double x) { return u(x); };
    const double spacing = 2e-6;
    for (double y : {0.05, 0.2, 0.23, 0.5, 1.0, 1.4, 1.6, 2.0, 2.9, 3.0, 4.0}) {
        CAPTURE(y);
        const double brute = oracle::brute_conjugate(f, y, 20.0, spacing);
        CHECK(c(y) >= brute - 1e-12);
        CHECK(c(y) - brute <= spacing * (3.0 + y));
    }
}

TEST_CASE("grid conjugate of a custom truncated utility agrees with the oracle") {
    const Utility custom([](double x) { return 1.0 - std::exp(-x); }, [](double x) { return std::exp(-x); },
                         "exponential");
    const Utility u = lipschitz_truncate(custom, 6.0, 1.0);
    CHECK(u.kind() == UtilityKind::truncated_custom);
    const ConjugateUtility c = conjugate_spec(u);
    const auto f = [&](double x) { return u(x); };
    for (double y : {0.01, 0.1, 0.3, 0.5, 0.8}) {
        CAPTURE(y);
        CHECK(c(y) == doctest::Approx(oracle::brute_conjugate(f, y, 6.0, 1e-4)).epsilon(1e-6));
    }
    CHECK(c(u.lipschitz() + 0.1) == 0.0);
}

TEST_CASE("conjugate is convex, nonincreasing and satisfies Fenchel's inequality") {
    const Utility u = lipschitz_truncate(power_utility(0.5), 18.0, 8.0);
    const ConjugateUtility c = conjugate_spec(u);
    const auto ys = uniform(0.0, 5.0, 2001);
    for (std::size_t j = 1; j + 1 < ys.size(); ++j) {
        CHECK(c(ys[j]) <= c(ys[j - 1]) + 1e-12);
        CHECK(c(ys[j - 1]) - 2.0 * c(ys[j]) + c(ys[j + 1]) >= -1e-9);
    }
    for (double x : uniform(0.0, 25.0, 251)) {
        for (double y : uniform(1e-3, 5.0, 251)) CHECK(u(x) <= c(y) + x * y + 1e-9);
    }
}

TEST_CASE("biconjugacy on a y-grid") {
    const Utility u = lipschitz_truncate(power_utility(0.5), 18.0, 8.0);
    const ConjugateUtility c = conjugate_spec(u);
    const double dy = 20.0 / 790.0;
    std::vector<double> cy;
    for (int j = 0; j <= 790; ++j) cy.push_back(c(j * dy));
    for (double x : uniform(0.01, 20.0, 400)) {
        double best = INFINITY;
        for (int j = 1; j <= 790; ++j) best = std::min(best, cy[j] + x * j * dy);
        const double g = best - u(x);
        CHECK(g >= -1e-9);
        CHECK(g <= x * dy + 1e-9);
    }
}

}
