#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sldual/lattice.hpp"
#include "sldual/market.hpp"
#include "sldual/quadrature.hpp"
#include "sldual/utility.hpp"

namespace sldual {

enum class Direction { primal, dual };

/// W(t_n, x_m) (primal) or W~(t_n, y_j) (dual) on the full space-time lattice.
struct ValueSurface {
    SpaceGrid grid;
    TimeGrid times;
    Direction direction = Direction::primal;
    double plateau = 0.0;            // value used beyond the right end of the grid
    std::vector<double> controls;    // control mesh shared by every (n, m)
    std::vector<double> data;        // (N+1) x (J+1), row-major in n
    std::vector<int> argopt;         // N x (J+1) indices into `controls`

    [[nodiscard]] std::span<const double> row(int n) const {
        return {data.data() + static_cast<std::size_t>(n) * grid.size(), grid.size()};
    }
    [[nodiscard]] double at(int n, int m) const { return row(n)[m]; }
    [[nodiscard]] std::span<const int> argopt_row(int n) const {
        return {argopt.data() + static_cast<std::size_t>(n) * grid.size(), grid.size()};
    }
};

/// One level of the fully discrete scheme.
struct DiscretizationConfig {
    int steps = 0;              // N
    int space_intervals = 0;    // J
    double x_max = 20.0;
    int controls = 1;           // N_a
    int quadrature_order = 4;   // M
    double y_max = 20.0;
    int dual_intervals = 0;     // J_dual
    int dual_controls = 1;      // N_gamma
};

/// Refinement level k: N = base * 2^k, J = ceil(N^exponent), N_a = N_gamma = 2^k + 1,
/// dual grid equal to the primal one.
[[nodiscard]] DiscretizationConfig ladder_level(int k, double x_max, int quadrature_order = 4,
                                                int base_steps = 4, double exponent = 11.0 / 8.0);
/// ceil(N^exponent), guarded against round-off at exact powers.
[[nodiscard]] int coupled_space_intervals(int steps, double exponent = 11.0 / 8.0);

struct StepResult {
    std::vector<double> values;
    std::vector<int> argopt;
};

/// W(t_n, x_m) = max_a sum_i lambda_i I[W](t_{n+1}, x_m + h x_m mu(a) + sqrt(h) x_m a sigma xi_i).
/// The maximiser with the smallest mesh index wins ties; m = 0 copies next_row[0].
/// Throws NumericalFailure on non-finite sums.
[[nodiscard]] StepResult primal_step(std::span<const double> next_row, const SpaceGrid& grid,
                                     double plateau, int n, const TimeGrid& times,
                                     const MarketModel& model, const QuadratureRule& rule,
                                     std::span<const double> control_mesh);

/// W~(t_n, y_j) = min_gamma sum_i lambda_i I[W~](t_{n+1},
///     y_j - h y_j (r + g~(t_n, gamma)) + sqrt(h) y_j (r - b - gamma) / sigma xi_i).
[[nodiscard]] StepResult dual_step(std::span<const double> next_row, const SpaceGrid& grid,
                                   double plateau, int n, const TimeGrid& times,
                                   const MarketModel& model, const QuadratureRule& rule,
                                   std::span<const double> dual_mesh);

/// Backward sweep n = N-1..0 starting from U_rho at the nodes. The plateau
/// beyond x_max is U_rho(rho) (U(x_max) for an untruncated utility).
[[nodiscard]] ValueSurface solve_primal(const MarketModel& model, const Utility& utility,
                                        const DiscretizationConfig& config);

/// Backward sweep for the dual recursion from the conjugate at the dual nodes;
/// the plateau beyond y_max is the conjugate's constant branch.
[[nodiscard]] ValueSurface solve_dual(const MarketModel& model, const ConjugateUtility& conjugate,
                                      const DiscretizationConfig& config);

/// Writes `t,x,value` rows, time-major, in %.15e.
void write_surface_csv(std::ostream& out, const ValueSurface& surface);

struct ChainSpec {
    const MarketModel* model = nullptr;
    QuadratureRule rule;
    int start_step = 0;        // n, so the chain starts at t_n
    double start = 1.0;        // x or y
    double h = 0.0;
    std::vector<double> policy;  // one control per step from t_n on
    Direction direction = Direction::primal;
};

struct ChainState {
    double state;
    double probability;
};

/// Exact terminal law of the Markov chain after `steps` transitions, listed
/// branch by branch (M^steps entries, node index ascending per step).
/// Throws ResourceLimit when M^steps exceeds 1e7.
[[nodiscard]] std::vector<ChainState> enumerate_chain(const ChainSpec& spec, int steps);

inline constexpr double kMaxChainBranches = 1e7;

}  // namespace sldual
