#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "sldual/market.hpp"
#include "sldual/quadrature.hpp"
#include "sldual/solver.hpp"

namespace sldual {

struct GapOptions {
    /// Lets the minimisation use y_0 = 0, where W~(t, 0) = U(rho) exactly.
    /// The conjugate value function is continuous at 0, so the infimum over
    /// y > 0 is the same; on coarse grids the node y_0 stands in for the
    /// small-y region the grid cannot resolve. Off gives the strict j >= 1 minimum.
    bool include_zero_dual_node = true;
};

/// G(t_n, x_m) = min_j {W~(t_n, y_j) + x_m y_j} - W(t_n, x_m) for m = 1..J.
struct GapReport {
    int n = 0;
    std::vector<double> x;
    std::vector<double> gap;
    std::vector<double> argmin_y;     // I(t_n, x_m)
    std::vector<int> argmin_index;    // j*
    std::vector<bool> at_boundary;    // j* is the first admissible or the last dual node
};

/// Exhaustive minimum over the dual nodes, smallest j on ties. Throws
/// std::invalid_argument when the surfaces have different time grids.
[[nodiscard]] GapReport duality_gap(const ValueSurface& primal, const ValueSurface& dual, int n,
                                    const GapOptions& options = {});

struct BoundConstants {
    double c = 0.0;         // C
    double c_dual = 0.0;    // C~
    double lipschitz = 0.0;       // L_rho
    double lipschitz_dual = 0.0;  // L~_rho
    int order = 4;          // M
    double h = 0.0;
    double dx = 0.0;
};

/// Per-node a posteriori enclosure of v(t_n, x_m) - W(t_n, x_m):
///   lower = -L C (1 + x^{2M}) (h^{(M-1)/2M} + dx/h)
///   upper = G + L~ C~ (1 + I^{2M}) (h^{(M-1)/2M} + dx/h) + delta(x)
struct BoundReport {
    BoundConstants constants;
    std::vector<double> x;
    std::vector<double> gap;
    std::vector<double> argmin_y;
    std::vector<double> delta;
    std::vector<double> lower;
    std::vector<double> upper;
};

[[nodiscard]] BoundReport aposteriori_bounds(const GapReport& gap, const BoundConstants& constants,
                                             const std::function<double(double)>& delta);

/// `x,gap,argmin_y,lower,upper` rows in %.15e.
void write_bound_csv(std::ostream& out, const BoundReport& report);

struct PolarCheck {
    double product_expectation = 0.0;  // E[X_N Y_N]
    double defect = 0.0;               // E[X_N Y_N] - x y
};

/// Exact expectation of the product of the primal and dual chains driven by
/// the same quadrature draw at each step, over all M^N branches. Policies
/// hold one control per step. Throws ResourceLimit above 1e7 branches.
[[nodiscard]] PolarCheck polar_property_check(const MarketModel& model, const QuadratureRule& rule,
                                              int steps, double x, double y,
                                              const std::vector<double>& primal_policy,
                                              const std::vector<double>& dual_policy);

}  // namespace sldual
