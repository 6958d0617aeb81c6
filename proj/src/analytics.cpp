#include "sldual/analytics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sldual/csv.hpp"

namespace sldual {

Norms window_norms(std::span<const double> x, std::span<const double> errors, const Window& window,
                   double dx) {
    if (x.size() != errors.size()) throw std::invalid_argument("window_norms: size mismatch");
    const double slack = 1e-12 * (1.0 + std::abs(window.lo) + std::abs(window.hi));
    Norms out;
    double sum_abs = 0.0;
    double sum_sq = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < window.lo - slack || x[i] > window.hi + slack) continue;
        const double e = std::abs(errors[i]);
        out.linf = std::max(out.linf, e);
        sum_abs += e;
        sum_sq += e * e;
        ++used;
    }
    if (used == 0) {
        throw std::invalid_argument("window_norms: no grid point in [" + std::to_string(window.lo) +
                                    ", " + std::to_string(window.hi) + "]");
    }
    out.l1 = dx * sum_abs;
    out.l2 = std::sqrt(dx * sum_sq);
    return out;
}

Norms window_norms(std::span<const double> row, const SpaceGrid& grid,
                   const std::function<double(double)>& reference, const Window& window) {
    if (row.size() != grid.size()) throw std::invalid_argument("window_norms: row/grid mismatch");
    std::vector<double> xs;
    std::vector<double> errors;
    for (int m = 0; m <= grid.intervals(); ++m) {
        const double x = grid.node(m);
        if (x < window.lo - 1e-12 || x > window.hi + 1e-12) continue;
        xs.push_back(x);
        errors.push_back(row[m] - reference(x));
    }
    return window_norms(xs, errors, window, grid.dx());
}

std::vector<double> convergence_orders(std::span<const double> values) {
    std::vector<double> out;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!(values[k] > 0.0)) {
            throw std::invalid_argument("convergence_orders: value " + std::to_string(k) +
                                        " is not positive");
        }
        if (k > 0) out.push_back(std::log2(values[k - 1] / values[k]));
    }
    return out;
}

std::vector<DiscretizationConfig> RefinementLadder::levels() const {
    if (k_min > k_max) throw std::invalid_argument("RefinementLadder: k_min exceeds k_max");
    std::vector<DiscretizationConfig> out;
    for (int k = k_min; k <= k_max; ++k) {
        out.push_back(ladder_level(k, x_max, quadrature_order, base_steps, exponent));
    }
    return out;
}

namespace {

std::optional<double> order_of(double previous, double current) {
    if (!(previous > 0.0) || !(current > 0.0)) return std::nullopt;
    return std::log2(previous / current);
}

}  // namespace

ConvergenceTable run_ladder(const LadderProblem& problem, const RefinementLadder& ladder,
                            LadderMode mode) {
    if (mode == LadderMode::error && !problem.reference) {
        throw std::invalid_argument("run_ladder: error mode needs a reference solution");
    }
    std::optional<ConjugateUtility> conjugate;
    if (mode == LadderMode::gap) conjugate = conjugate_spec(problem.utility);

    ConvergenceTable table;
    int k = ladder.k_min;
    for (const DiscretizationConfig& config : ladder.levels()) {
        const auto start = std::chrono::steady_clock::now();
        ConvergenceRow row;
        row.k = k++;
        row.steps = config.steps;
        row.space_intervals = config.space_intervals;
        const ValueSurface primal = solve_primal(problem.model, problem.utility, config);
        if (mode == LadderMode::error) {
            row.norms = window_norms(primal.row(0), primal.grid, problem.reference, problem.window);
        } else {
            const ValueSurface dual = solve_dual(problem.model, *conjugate, config);
            const GapReport gap = duality_gap(primal, dual, 0, problem.gap_options);
            row.norms = window_norms(gap.x, gap.gap, problem.window, primal.grid.dx());
        }
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!table.rows.empty()) {
            const Norms& prev = table.rows.back().norms;
            row.order_l1 = order_of(prev.l1, row.norms.l1);
            row.order_l2 = order_of(prev.l2, row.norms.l2);
            row.order_linf = order_of(prev.linf, row.norms.linf);
        }
        table.rows.push_back(row);
    }
    return table;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table, bool with_timing) {
    const auto opt = [](const std::optional<double>& v) { return v ? csv::number(*v) : std::string(); };
    out << "J,N,l1,order_l1,l2,order_l2,linf,order_linf,cpu_s\n";
    for (const ConvergenceRow& r : table.rows) {
        out << r.space_intervals << ',' << r.steps << ',' << csv::number(r.norms.l1) << ','
            << opt(r.order_l1) << ',' << csv::number(r.norms.l2) << ',' << opt(r.order_l2) << ','
            << csv::number(r.norms.linf) << ',' << opt(r.order_linf) << ','
            << (with_timing ? csv::number(r.seconds) : std::string("-")) << '\n';
    }
}

}  // namespace sldual
