#include "sldual/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sldual/csv.hpp"
#include "sldual/error.hpp"

namespace sldual {

namespace {

struct ControlCoefficients {
    double drift;  // multiplies h * state
    double vol;    // multiplies sqrt(h) * state * xi
};

void require_row(std::span<const double> row, const SpaceGrid& grid) {
    if (row.size() != grid.size()) {
        throw std::invalid_argument("step: row has " + std::to_string(row.size()) +
                                    " entries, grid has " + std::to_string(grid.size()));
    }
}

StepResult sl_step(std::span<const double> next_row, const SpaceGrid& grid, double plateau, int n,
                   double h, std::span<const ControlCoefficients> coeffs,
                   std::span<const double> mesh, const QuadratureRule& rule, bool maximize) {
    require_row(next_row, grid);
    if (coeffs.empty()) throw std::invalid_argument("step: empty control mesh");
    const LinearInterpolant interp(grid, next_row, plateau);
    const double root_h = std::sqrt(h);
    const int nodes = static_cast<int>(grid.size());
    const int quad = static_cast<int>(rule.nodes.size());
    const int controls = static_cast<int>(coeffs.size());

    StepResult out{std::vector<double>(grid.size()), std::vector<int>(grid.size(), 0)};
    out.values[0] = next_row[0];

    // Nodes are independent; each reduction runs sequentially so the result
    // does not depend on the thread schedule.
    bool failed = false;
    int failed_m = 0;
    int failed_k = 0;
#pragma omp parallel for schedule(static)
    for (int m = 1; m < nodes; ++m) {
        const double x = grid.node(m);
        double best = 0.0;
        int best_k = -1;
        for (int k = 0; k < controls; ++k) {
            const double dx = h * x * coeffs[k].drift;
            const double spread = root_h * x * coeffs[k].vol;
            double acc = 0.0;
            for (int i = 0; i < quad; ++i) {
                acc += rule.weights[i] * interp(x + dx + spread * rule.nodes[i]);
            }
            if (!std::isfinite(acc)) {
#pragma omp critical(sldual_step_failure)
                {
                    if (!failed || m < failed_m) {
                        failed = true;
                        failed_m = m;
                        failed_k = k;
                    }
                }
                break;
            }
            if (best_k < 0 || (maximize ? acc > best : acc < best)) {
                best = acc;
                best_k = k;
            }
        }
        out.values[m] = best;
        out.argopt[m] = best_k < 0 ? 0 : best_k;
    }
    if (failed) {
        std::ostringstream msg;
        msg << "non-finite scheme value at n=" << n << ", m=" << failed_m
            << ", control=" << mesh[failed_k];
        throw NumericalFailure(msg.str());
    }
    return out;
}

double primal_plateau(const Utility& u, const SpaceGrid& grid) {
    return u.is_truncated() ? u.plateau() : u(grid.x_max());
}

}  // namespace

int coupled_space_intervals(int steps, double exponent) {
    if (steps < 1) throw std::invalid_argument("coupled_space_intervals: steps must be positive");
    if (!(exponent > 0.0)) throw std::invalid_argument("coupled_space_intervals: exponent must be positive");
    const double v = std::pow(static_cast<double>(steps), exponent);
    return static_cast<int>(std::ceil(v - 1e-9 * v));
}

DiscretizationConfig ladder_level(int k, double x_max, int quadrature_order, int base_steps,
                                  double exponent) {
    if (k < 0 || k > 20) throw std::invalid_argument("ladder_level: k must lie in [0, 20]");
    if (base_steps < 1) throw std::invalid_argument("ladder_level: base step count must be positive");
    DiscretizationConfig c;
    c.steps = base_steps << k;
    c.space_intervals = coupled_space_intervals(c.steps, exponent);
    c.x_max = x_max;
    c.controls = (1 << k) + 1;
    c.quadrature_order = quadrature_order;
    c.y_max = x_max;
    c.dual_intervals = c.space_intervals;
    c.dual_controls = c.controls;
    return c;
}

StepResult primal_step(std::span<const double> next_row, const SpaceGrid& grid, double plateau,
                       int n, const TimeGrid& times, const MarketModel& model,
                       const QuadratureRule& rule, std::span<const double> control_mesh) {
    const double t = times.time(n);
    std::vector<ControlCoefficients> coeffs;
    coeffs.reserve(control_mesh.size());
    const double r = model.r(t);
    const double b = model.b(t);
    const double s = model.sigma(t);
    for (double a : control_mesh) {
        if (!model.controls.contains(a)) {
            throw std::invalid_argument("primal_step: control " + std::to_string(a) + " outside A");
        }
        coeffs.push_back({r + a * (b - r) + model.g(t, a), a * s});
    }
    return sl_step(next_row, grid, plateau, n, times.h(), coeffs, control_mesh, rule, true);
}

StepResult dual_step(std::span<const double> next_row, const SpaceGrid& grid, double plateau, int n,
                     const TimeGrid& times, const MarketModel& model, const QuadratureRule& rule,
                     std::span<const double> dual_mesh) {
    const double t = times.time(n);
    std::vector<ControlCoefficients> coeffs;
    coeffs.reserve(dual_mesh.size());
    const double r = model.r(t);
    const double b = model.b(t);
    const double s = model.sigma(t);
    if (s == 0.0) throw std::invalid_argument("dual_step: sigma(t) = 0");
    for (double gamma : dual_mesh) {
        if (!model.dual_controls.contains(gamma)) {
            throw std::invalid_argument("dual_step: control " + std::to_string(gamma) +
                                        " outside Gamma");
        }
        coeffs.push_back({-(r + g_tilde(model, t, gamma)), (r - b - gamma) / s});
    }
    return sl_step(next_row, grid, plateau, n, times.h(), coeffs, dual_mesh, rule, false);
}

namespace {

template <typename StepFn>
void sweep(ValueSurface& surface, StepFn&& step) {
    const std::size_t width = surface.grid.size();
    const int steps = surface.times.steps();
    for (int n = steps - 1; n >= 0; --n) {
        const std::span<const double> next(surface.data.data() + (n + 1) * width, width);
        StepResult res = step(next, n);
        std::copy(res.values.begin(), res.values.end(), surface.data.begin() + n * width);
        std::copy(res.argopt.begin(), res.argopt.end(), surface.argopt.begin() + n * width);
    }
}

}  // namespace

ValueSurface solve_primal(const MarketModel& model, const Utility& utility,
                          const DiscretizationConfig& config) {
    if (!model.controls.bounded()) {
        throw std::invalid_argument("solve_primal: the control set must be bounded");
    }
    const SpaceGrid grid(config.x_max, config.space_intervals);
    const TimeGrid times(model.horizon, config.steps);
    const QuadratureRule rule = gauss_hermite_rule(config.quadrature_order);

    ValueSurface surface{grid, times, Direction::primal, 0.0, {}, {}, {}};
    surface.direction = Direction::primal;
    surface.plateau = primal_plateau(utility, grid);
    surface.controls = control_mesh(model.controls.lo, model.controls.hi, config.controls);
    surface.data.assign(static_cast<std::size_t>(times.steps() + 1) * grid.size(), 0.0);
    surface.argopt.assign(static_cast<std::size_t>(times.steps()) * grid.size(), 0);

    const std::size_t last = static_cast<std::size_t>(times.steps()) * grid.size();
    for (int m = 0; m <= grid.intervals(); ++m) surface.data[last + m] = utility(grid.node(m));

    sweep(surface, [&](std::span<const double> next, int n) {
        return primal_step(next, grid, surface.plateau, n, times, model, rule, surface.controls);
    });
    return surface;
}

ValueSurface solve_dual(const MarketModel& model, const ConjugateUtility& conjugate,
                        const DiscretizationConfig& config) {
    const SpaceGrid grid(config.y_max, config.dual_intervals);
    const TimeGrid times(model.horizon, config.steps);
    const QuadratureRule rule = gauss_hermite_rule(config.quadrature_order);

    ValueSurface surface{grid, times, Direction::primal, 0.0, {}, {}, {}};
    surface.direction = Direction::dual;
    surface.plateau = conjugate.plateau();
    surface.controls =
        control_mesh(model.dual_controls.lo, model.dual_controls.hi, config.dual_controls);
    surface.data.assign(static_cast<std::size_t>(times.steps() + 1) * grid.size(), 0.0);
    surface.argopt.assign(static_cast<std::size_t>(times.steps()) * grid.size(), 0);

    const std::size_t last = static_cast<std::size_t>(times.steps()) * grid.size();
    for (int j = 0; j <= grid.intervals(); ++j) surface.data[last + j] = conjugate(grid.node(j));

    sweep(surface, [&](std::span<const double> next, int n) {
        return dual_step(next, grid, surface.plateau, n, times, model, rule, surface.controls);
    });
    return surface;
}

void write_surface_csv(std::ostream& out, const ValueSurface& surface) {
    out << "t,x,value\n";
    for (int n = 0; n <= surface.times.steps(); ++n) {
        const std::string t = csv::number(surface.times.time(n));
        const auto values = surface.row(n);
        for (int m = 0; m <= surface.grid.intervals(); ++m) {
            out << t << ',' << csv::number(surface.grid.node(m)) << ',' << csv::number(values[m])
                << '\n';
        }
    }
}

std::vector<ChainState> enumerate_chain(const ChainSpec& spec, int steps) {
    if (spec.model == nullptr) throw std::invalid_argument("enumerate_chain: no model");
    if (steps < 0) throw std::invalid_argument("enumerate_chain: steps must be nonnegative");
    if (static_cast<int>(spec.policy.size()) < steps) {
        throw std::invalid_argument("enumerate_chain: policy shorter than the horizon");
    }
    const int quad = static_cast<int>(spec.rule.nodes.size());
    if (quad == 0) throw std::invalid_argument("enumerate_chain: empty quadrature rule");
    if (std::pow(static_cast<double>(quad), steps) > kMaxChainBranches) {
        throw ResourceLimit("enumerate_chain: " + std::to_string(quad) + "^" +
                            std::to_string(steps) + " branches exceed the 1e7 budget");
    }
    const MarketModel& model = *spec.model;
    const double root_h = std::sqrt(spec.h);

    std::vector<ChainState> layer{{spec.start, 1.0}};
    for (int s = 0; s < steps; ++s) {
        const double t = (spec.start_step + s) * spec.h;
        const double c = spec.policy[s];
        double drift = 0.0;
        double vol = 0.0;
        if (spec.direction == Direction::primal) {
            if (!model.controls.contains(c)) {
                throw std::invalid_argument("enumerate_chain: control outside A");
            }
            drift = model.r(t) + c * (model.b(t) - model.r(t)) + model.g(t, c);
            vol = c * model.sigma(t);
        } else {
            if (!model.dual_controls.contains(c)) {
                throw std::invalid_argument("enumerate_chain: control outside Gamma");
            }
            drift = -(model.r(t) + g_tilde(model, t, c));
            vol = (model.r(t) - model.b(t) - c) / model.sigma(t);
        }
        std::vector<ChainState> next;
        next.reserve(layer.size() * quad);
        for (const ChainState& st : layer) {
            for (int i = 0; i < quad; ++i) {
                next.push_back({st.state + spec.h * st.state * drift +
                                    root_h * st.state * vol * spec.rule.nodes[i],
                                st.probability * spec.rule.weights[i]});
            }
        }
        layer = std::move(next);
    }
    return layer;
}

}  // namespace sldual
