#include "sldual/duality.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "sldual/csv.hpp"
#include "sldual/error.hpp"

namespace sldual {

GapReport duality_gap(const ValueSurface& primal, const ValueSurface& dual, int n,
                      const GapOptions& options) {
    if (!(primal.times == dual.times)) {
        throw std::invalid_argument("duality_gap: primal and dual surfaces use different time grids");
    }
    if (primal.direction != Direction::primal || dual.direction != Direction::dual) {
        throw std::invalid_argument("duality_gap: surfaces passed in the wrong order");
    }
    if (n < 0 || n > primal.times.steps()) {
        throw std::invalid_argument("duality_gap: time index " + std::to_string(n) + " out of range");
    }
    const auto w = primal.row(n);
    const auto wt = dual.row(n);
    const int first = options.include_zero_dual_node ? 0 : 1;
    const int last = dual.grid.intervals();
    const int count = primal.grid.intervals();

    GapReport out;
    out.n = n;
    out.x.resize(count);
    out.gap.resize(count);
    out.argmin_y.resize(count);
    out.argmin_index.resize(count);
    out.at_boundary.resize(count);
    std::vector<char> boundary(count);

#pragma omp parallel for schedule(static)
    for (int m = 1; m <= count; ++m) {
        const double x = primal.grid.node(m);
        int best_j = first;
        double best = wt[first] + x * dual.grid.node(first);
        for (int j = first + 1; j <= last; ++j) {
            const double v = wt[j] + x * dual.grid.node(j);
            if (v < best) {
                best = v;
                best_j = j;
            }
        }
        out.x[m - 1] = x;
        out.gap[m - 1] = best - w[m];
        out.argmin_y[m - 1] = dual.grid.node(best_j);
        out.argmin_index[m - 1] = best_j;
        boundary[m - 1] = best_j == first || best_j == last;
    }
    for (int i = 0; i < count; ++i) out.at_boundary[i] = boundary[i] != 0;
    return out;
}

BoundReport aposteriori_bounds(const GapReport& gap, const BoundConstants& constants,
                               const std::function<double(double)>& delta) {
    const BoundConstants& c = constants;
    if (c.c < 0.0 || c.c_dual < 0.0 || c.lipschitz < 0.0 || c.lipschitz_dual < 0.0) {
        throw std::invalid_argument("aposteriori_bounds: constants must be nonnegative");
    }
    if (!(c.h > 0.0) || !(c.dx > 0.0) || c.order < 1) {
        throw std::invalid_argument("aposteriori_bounds: need h > 0, dx > 0 and M >= 1");
    }
    const int two_m = 2 * c.order;
    const double rate = std::pow(c.h, (c.order - 1.0) / two_m) + c.dx / c.h;

    BoundReport out;
    out.constants = c;
    out.x = gap.x;
    out.gap = gap.gap;
    out.argmin_y = gap.argmin_y;
    const std::size_t count = gap.x.size();
    out.delta.resize(count);
    out.lower.resize(count);
    out.upper.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = gap.x[i];
        const double y = gap.argmin_y[i];
        out.delta[i] = delta ? delta(x) : 0.0;
        out.lower[i] = -c.lipschitz * c.c * (1.0 + std::pow(x, two_m)) * rate;
        out.upper[i] = gap.gap[i] + c.lipschitz_dual * c.c_dual * (1.0 + std::pow(y, two_m)) * rate +
                       out.delta[i];
    }
    return out;
}

void write_bound_csv(std::ostream& out, const BoundReport& report) {
    out << "x,gap,argmin_y,lower,upper\n";
    for (std::size_t i = 0; i < report.x.size(); ++i) {
        out << csv::number(report.x[i]) << ',' << csv::number(report.gap[i]) << ','
            << csv::number(report.argmin_y[i]) << ',' << csv::number(report.lower[i]) << ','
            << csv::number(report.upper[i]) << '\n';
    }
}

namespace {

struct ProductStep {
    double primal_drift;
    double primal_vol;
    double dual_drift;
    double dual_vol;
};

double product_expectation(const std::vector<ProductStep>& steps, const QuadratureRule& rule,
                           double root_h, double h, std::size_t s, double x, double y) {
    if (s == steps.size()) return x * y;
    const ProductStep& c = steps[s];
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double z = rule.nodes[i];
        const double xn = x + h * x * c.primal_drift + root_h * x * c.primal_vol * z;
        const double yn = y + h * y * c.dual_drift + root_h * y * c.dual_vol * z;
        acc += rule.weights[i] * product_expectation(steps, rule, root_h, h, s + 1, xn, yn);
    }
    return acc;
}

}  // namespace

PolarCheck polar_property_check(const MarketModel& model, const QuadratureRule& rule, int steps,
                                double x, double y, const std::vector<double>& primal_policy,
                                const std::vector<double>& dual_policy) {
    if (steps < 1) throw std::invalid_argument("polar_property_check: steps must be positive");
    if (static_cast<int>(primal_policy.size()) < steps ||
        static_cast<int>(dual_policy.size()) < steps) {
        throw std::invalid_argument("polar_property_check: policy shorter than the horizon");
    }
    if (std::pow(static_cast<double>(rule.nodes.size()), steps) > kMaxChainBranches) {
        throw ResourceLimit("polar_property_check: " + std::to_string(rule.nodes.size()) + "^" +
                            std::to_string(steps) + " branches exceed the 1e7 budget");
    }
    const double h = model.horizon / steps;
    std::vector<ProductStep> coeffs;
    coeffs.reserve(steps);
    for (int s = 0; s < steps; ++s) {
        const double t = s * h;
        const double a = primal_policy[s];
        const double gamma = dual_policy[s];
        if (!model.controls.contains(a)) {
            throw std::invalid_argument("polar_property_check: primal control outside A");
        }
        if (!model.dual_controls.contains(gamma)) {
            throw std::invalid_argument("polar_property_check: dual control outside Gamma");
        }
        const double r = model.r(t);
        const double b = model.b(t);
        const double sig = model.sigma(t);
        coeffs.push_back({r + a * (b - r) + model.g(t, a), a * sig, -(r + g_tilde(model, t, gamma)),
                          (r - b - gamma) / sig});
    }
    PolarCheck out;
    out.product_expectation = product_expectation(coeffs, rule, std::sqrt(h), h, 0, x, y);
    out.defect = out.product_expectation - x * y;
    return out;
}

}  // namespace sldual
