#include "sldual/apriori.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sldual {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double gh_factor(double c_psi, double k5, const QuadratureRule& rule) {
    const int m = rule.order;
    return k5 * std::pow(2.0, 2 * m - 1) / factorial(2 * m) * std::pow(c_psi, 2 * m) *
           (normal_moment(2 * m) + moment_defect(rule));
}

double em_factor(const ConstantSet& k, double c_psi, double horizon) {
    const double k1 = k.k1();
    return std::sqrt(24.0 * k1 * horizon * c_psi * c_psi *
                     (1.0 + 4.0 * k1 * horizon * std::exp(4.0 * k1 * horizon)));
}

double tail(double log_ratio, double mu, double gamma, double horizon) {
    const double shifted = log_ratio - mu * horizon;
    if (shifted <= 0.0) return 1.0;
    return std::min(1.0, 2.0 * std::exp(-3.0 / (8.0 * gamma * gamma * horizon) * shifted * shifted));
}

}  // namespace

ConstantSet::ConstantSet(double c_mu, double c_psi, double horizon, int order)
    : c_mu_(c_mu), c_psi_(c_psi), horizon_(horizon), order_(order) {
    if (!(c_mu >= 0.0) || !(c_psi >= 0.0) || !std::isfinite(c_mu) || !std::isfinite(c_psi)) {
        throw std::invalid_argument("ConstantSet: coefficient bounds must be finite and nonnegative");
    }
    if (!(horizon > 0.0)) throw std::invalid_argument("ConstantSet: horizon must be positive");
    if (order < 1) throw std::invalid_argument("ConstantSet: order must be positive");
}

double ConstantSet::k1() const { return c_mu_ * c_mu_ * horizon_ + c_psi_ * c_psi_; }

double ConstantSet::k2(double xi) const { return c_mu_ * c_mu_ * xi + 4.0 * c_psi_ * c_psi_; }

double ConstantSet::k3(double x) const {
    const double k2t = k2(horizon_);
    return 3.0 * (x * x + 2.0 * k2t * horizon_) * std::exp(6.0 * k2t * horizon_);
}

double ConstantSet::k4() const {
    const double c1 = std::max(c_mu_, c_psi_);
    const double m = order_;
    return 2.0 * m * c1 * std::pow(2.0, 2 * order_) +
           m * (2.0 * m - 1.0) * c1 * c1 * std::pow(2.0, 2 * order_ - 2);
}

double ConstantSet::k5() const {
    const double k1t = k1() * horizon_;
    return std::sqrt(3.0 + 9.0 * k1t * std::exp(3.0 * k1t));
}

double em_bound(double h, double x, double lipschitz, const CoefficientBounds& bounds,
                double horizon, EmVariant variant) {
    if (!(h > 0.0)) throw std::invalid_argument("em_bound: h must be positive");
    const ConstantSet k(bounds, horizon, 1);
    if (variant == EmVariant::multiplicative) {
        return lipschitz * em_factor(k, bounds.vol, horizon) * std::abs(x) * std::sqrt(h);
    }
    const double k1 = k.k1();
    return lipschitz *
           std::sqrt(8.0 * k1 * (1.0 + 2.0 * k.k2(h)) * (1.0 + k.k3(x)) *
                     (1.0 + 8.0 * k1 * horizon * std::exp(8.0 * k1 * horizon))) *
           std::sqrt(h);
}

double gh_bound(double h, double x, int order, double lipschitz, const CoefficientBounds& bounds,
                double horizon, const QuadratureRule& rule, GhMoment moment) {
    if (rule.order != order) {
        throw std::invalid_argument("gh_bound: quadrature rule has order " +
                                    std::to_string(rule.order) + ", expected " +
                                    std::to_string(order));
    }
    if (!(h > 0.0)) throw std::invalid_argument("gh_bound: h must be positive");
    const ConstantSet k(bounds, horizon, order);
    const double x2m = std::pow(x, 2 * order);
    const double growth = moment == GhMoment::simplified
                              ? 1.0 + x2m
                              : 1.0 + x2m * std::exp(k.k4() * horizon) + k.k4() * horizon;
    return lipschitz * gh_factor(bounds.vol, k.k5(), rule) *
           std::pow(h, (order - 1.0) / (2.0 * order)) * growth;
}

TailBounds tail_bounds(double x, double rho, double c0, double mu, double gamma, double horizon) {
    if (!(x > 0.0) || !(rho > 0.0) || !(gamma > 0.0) || !(c0 > 0.0) || !(horizon > 0.0)) {
        throw std::invalid_argument("tail_bounds: x, rho, c0, gamma and T must be positive");
    }
    return {tail(std::log(rho / x), mu, gamma, horizon),
            tail(std::log(rho * x / c0), mu, gamma, horizon)};
}

double delta_allowance(double x, double rho, double c0, const CoefficientBounds& bounds,
                       double horizon, const Utility& utility) {
    if (!(x > 0.0)) return utility.base(c0 / rho);
    const double mu = bounds.log_drift;
    const double gamma = bounds.vol;
    const double lower = tail_bounds(x, rho, c0, mu, gamma, horizon).lower_tail;
    const double slope = utility.base_derivative(rho);

    double sum = 0.0;
    if (slope != 0.0) {
        constexpr long kDirectTerms = 1'000'000;
        const long start = std::max(1L, static_cast<long>(std::floor(rho)));
        const auto term = [&](double k) { return tail_bounds(x, k, c0, mu, gamma, horizon).upper_tail; };
        long k = start;
        bool done = false;
        for (; k < start + kDirectTerms; ++k) {
            const double v = term(static_cast<double>(k));
            sum += v;
            if (v < 1e-16 && std::log(k / x) > mu * horizon) {
                done = true;
                break;
            }
        }
        // The terms decrease in k, so a block [K, 2K) contributes at most K P(K).
        for (double block = static_cast<double>(k); !done && block < 1e300; block *= 2.0) {
            const double v = block * term(block);
            sum += v;
            if (v < 1e-16) done = true;
        }
    }
    return utility.base(c0 / rho) * lower + slope * sum;
}

double delta_allowance(double x, double rho, double c0, const MarketModel& model,
                       const Utility& utility) {
    return delta_allowance(x, rho, c0, coefficient_bounds(model), model.horizon, utility);
}

double scheme_constant(const CoefficientBounds& bounds, double horizon, const QuadratureRule& rule) {
    const ConstantSet k(bounds, horizon, rule.order);
    const double c_gh = gh_factor(bounds.vol, k.k5(), rule);
    const double c_em = em_factor(k, bounds.vol, horizon);
    return c_gh + c_em * std::pow(horizon, 1.0 / (2.0 * rule.order)) + horizon;
}

BoundConstants default_bound_constants(const MarketModel& model, const Utility& utility,
                                       const QuadratureRule& rule, double h, double dx) {
    BoundConstants out;
    out.c = scheme_constant(coefficient_bounds(model), model.horizon, rule);
    out.c_dual = scheme_constant(dual_coefficient_bounds(model), model.horizon, rule);
    out.lipschitz = utility.lipschitz();
    out.lipschitz_dual = conjugate_spec(utility).lipschitz();
    out.order = rule.order;
    out.h = h;
    out.dx = dx;
    return out;
}

}  // namespace sldual
