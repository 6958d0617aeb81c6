#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sldual/duality.hpp"
#include "sldual/market.hpp"
#include "sldual/solver.hpp"
#include "sldual/utility.hpp"

namespace sldual {

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

struct Norms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

/// Norms of e over the points with x in [lo, hi]:
/// linf = max |e|, l1 = dx sum |e|, l2 = (dx sum e^2)^{1/2}.
/// Throws std::invalid_argument when no point lies in the window.
[[nodiscard]] Norms window_norms(std::span<const double> x, std::span<const double> errors,
                                 const Window& window, double dx);

/// Errors value_m - reference(x_m) over the grid nodes in the window.
[[nodiscard]] Norms window_norms(std::span<const double> row, const SpaceGrid& grid,
                                 const std::function<double(double)>& reference, const Window& window);

/// log2(values[k-1] / values[k]) for k >= 1. Throws on nonpositive input.
[[nodiscard]] std::vector<double> convergence_orders(std::span<const double> values);

/// Levels k_min..k_max of the coupled refinement N = base 2^k, J = ceil(N^exponent).
struct RefinementLadder {
    int k_min = 1;
    int k_max = 5;
    double x_max = 20.0;
    int quadrature_order = 4;
    int base_steps = 4;
    double exponent = 11.0 / 8.0;

    [[nodiscard]] std::vector<DiscretizationConfig> levels() const;
};

struct ConvergenceRow {
    int k = 0;
    int steps = 0;
    int space_intervals = 0;
    Norms norms;
    std::optional<double> order_l1;
    std::optional<double> order_l2;
    std::optional<double> order_linf;
    double seconds = 0.0;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
};

enum class LadderMode { error, gap };

struct LadderProblem {
    MarketModel model;
    Utility utility;           // truncated terminal utility U_rho
    Window window;
    /// v(0, x); required in error mode.
    std::function<double(double)> reference;
    GapOptions gap_options;
};

/// Solves every level (primal, plus dual in gap mode) and tabulates the norms
/// at t = 0 with their orders.
[[nodiscard]] ConvergenceTable run_ladder(const LadderProblem& problem, const RefinementLadder& ladder,
                                          LadderMode mode);

/// `J,N,l1,order_l1,l2,order_l2,linf,order_linf,cpu_s`. Wall time is written
/// only when `with_timing` is set, otherwise "-", so files are reproducible.
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table, bool with_timing);

}  // namespace sldual
