#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "sldual/analytics.hpp"

using namespace sldual;

TEST_SUITE("analytics") {

TEST_CASE("norms of a constant error") {
    std::vector<double> x;
    std::vector<double> e;
    for (int m = 0; m <= 300; ++m) {
        x.push_back(0.01 * m);
        e.push_back(-0.5);
    }
    const Norms n = window_norms(x, e, {1.0, 2.0}, 0.01);
    CHECK(n.linf == 0.5);
    CHECK(n.l1 == doctest::Approx(0.5 * 1.01).epsilon(1e-12));
    CHECK(n.l2 == doctest::Approx(0.5 * std::sqrt(1.01)).epsilon(1e-12));
    const Norms z = window_norms(x, std::vector<double>(x.size(), 0.0), {1.0, 2.0}, 0.01);
    CHECK(z.l1 == 0.0);
    CHECK(z.l2 == 0.0);
    CHECK(z.linf == 0.0);
    CHECK_THROWS_AS((void)window_norms(x, e, {5.0, 6.0}, 0.01), std::invalid_argument);
    CHECK_THROWS_AS((void)window_norms(x, std::vector<double>{1.0}, {1.0, 2.0}, 0.01), std::invalid_argument);
}

TEST_CASE("norms against a reference on a grid") {
    const SpaceGrid grid(4.0, 8);
    std::vector<double> row(grid.size());
    for (int m = 0; m <= 8; ++m) row[m] = grid.node(m) + (m % 2 ? 0.1 : -0.2);
    const Norms n = window_norms(row, grid, [](double x) { return x; }, {1.0, 2.0});
    // nodes 1.0, 1.5, 2.0 carry errors -0.2, 0.1, -0.2
    CHECK(n.linf == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(n.l1 == doctest::Approx(0.5 * 0.5).epsilon(1e-14));
    CHECK(n.l2 == doctest::Approx(std::sqrt(0.5 * 0.09)).epsilon(1e-14));
}

TEST_CASE("empirical orders") {
    const auto a = convergence_orders(std::vector<double>{0.4, 0.1});
    REQUIRE(a.size() == 1u);
    CHECK(a[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(convergence_orders(std::vector<double>{5.86e-2, 1.52e-2})[0] == doctest::Approx(1.95).epsilon(0.005));
    for (double o : convergence_orders(std::vector<double>{3.0, 3.0, 3.0})) CHECK(o == 0.0);
    CHECK(convergence_orders(std::vector<double>{1.0}).empty());
    CHECK_THROWS_AS((void)convergence_orders(std::vector<double>{1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("refinement ladder") {
    RefinementLadder ladder;
    ladder.k_min = 1;
    ladder.k_max = 6;
    const auto levels = ladder.levels();
    REQUIRE(levels.size() == 6u);
    const int expected[] = {18, 46, 118, 305, 790, 2048};
    for (int i = 0; i < 6; ++i) {
        const double n = levels[i].steps;
        CHECK(levels[i].space_intervals == expected[i]);
        const double ratio = levels[i].space_intervals / std::pow(n, 11.0 / 8.0);
        CHECK(ratio >= 1.0 - 1e-12);
        CHECK(ratio < 1.0 + 1.0 / std::pow(n, 11.0 / 8.0) + 1e-12);
        if (i) CHECK(levels[i].steps == 2 * levels[i - 1].steps);
    }
}

TEST_CASE("ladder run and table layout") {
    const Utility u = lipschitz_truncate(power_utility(0.5), 18.0, 8.0);
    const MertonParams params;
    LadderProblem problem{merton_model(params), u, {1.0, 2.0},
                          [params](double x) { return merton_closed_form(params, 0.5, x); }, {}};
    RefinementLadder ladder;
    ladder.k_min = 1;
    ladder.k_max = 3;
    const ConvergenceTable t = run_ladder(problem, ladder, LadderMode::error);
    REQUIRE(t.rows.size() == 3u);
    CHECK_FALSE(t.rows[0].order_linf);
    REQUIRE(t.rows[1].order_linf);
    CHECK(*t.rows[1].order_linf ==
          doctest::Approx(std::log2(t.rows[0].norms.linf / t.rows[1].norms.linf)).epsilon(1e-15));
    CHECK(t.rows[2].steps == 32);
    CHECK(t.rows[2].space_intervals == 118);

    const ConvergenceTable again = run_ladder(problem, ladder, LadderMode::error);
    std::ostringstream a;
    std::ostringstream b;
    write_convergence_csv(a, t, false);
    write_convergence_csv(b, again, false);
    CHECK(a.str() == b.str());
    std::istringstream in(a.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "J,N,l1,order_l1,l2,order_l2,linf,order_linf,cpu_s");
    std::getline(in, line);
    CHECK(line.rfind("18,8,", 0) == 0);
    CHECK(line.substr(line.size() - 2) == ",-");

    LadderProblem no_ref = problem;
    no_ref.reference = nullptr;
    CHECK_THROWS_AS((void)run_ladder(no_ref, ladder, LadderMode::error), std::invalid_argument);
}

TEST_CASE("gap ladder decreases") {
    const Utility u = lipschitz_truncate(power_utility(0.5), 18.0, 8.0);
    MarketModel m = merton_model({});
    m.dual_controls = {-1.0, 1.0};
    LadderProblem problem{m, u, {0.0, 20.0}, {}, {}};
    RefinementLadder ladder;
    ladder.k_min = 1;
    ladder.k_max = 3;
    const ConvergenceTable t = run_ladder(problem, ladder, LadderMode::gap);
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].norms.linf < t.rows[i - 1].norms.linf);
}

}
