#include "sldual/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sldual/error.hpp"

namespace sldual {

namespace {

constexpr int kMaxNewtonIterations = 100;

struct HermiteEval {
    double value;       // orthonormal p_M(z)
    double derivative;  // d/dz p_M(z)
};

// Orthonormal Hermite recurrence: p_{-1} = 0, p_0 = pi^{-1/4},
// p_j = z sqrt(2/j) p_{j-1} - sqrt((j-1)/j) p_{j-2}.
HermiteEval hermite_orthonormal(int order, double z) {
    double p1 = std::pow(std::numbers::pi, -0.25);
    double p2 = 0.0;
    for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
    }
    return {p1, std::sqrt(2.0 * order) * p2};
}

}  // namespace

double QuadratureRule::moment(int power) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        sum += weights[i] * std::pow(nodes[i], power);
    }
    return sum;
}

QuadratureRule gauss_hermite_rule(int order) {
    if (order < 2 || order > 20) {
        throw std::invalid_argument("gauss_hermite_rule: order must lie in [2, 20], got " +
                                    std::to_string(order));
    }
    const int half = (order + 1) / 2;
    std::vector<double> roots(half);
    std::vector<double> raw_weights(half);

    // Roots are found from the largest downwards; each initial guess is an
    // asymptotic estimate built from the previously converged roots.
    double z = 0.0;
    for (int i = 0; i < half; ++i) {
        const double n = order;
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(n, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * roots[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * roots[1];
        } else {
            z = 2.0 * z - roots[i - 2];
        }

        bool converged = false;
        HermiteEval eval{};
        for (int it = 0; it < kMaxNewtonIterations; ++it) {
            eval = hermite_orthonormal(order, z);
            const double step = eval.value / eval.derivative;
            z -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw NumericalFailure("gauss_hermite_rule: Newton iteration did not converge for root " +
                                   std::to_string(i) + " of order " + std::to_string(order));
        }
        eval = hermite_orthonormal(order, z);
        roots[i] = z;
        raw_weights[i] = 2.0 / (eval.derivative * eval.derivative);
    }

    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    for (int i = 0; i < half; ++i) {
        // roots[0] is the largest; mirror so that nodes ascend exactly symmetric.
        const double xi = std::numbers::sqrt2 * roots[i];
        const double lambda = raw_weights[i] * inv_sqrt_pi;
        rule.nodes[i] = -xi;
        rule.nodes[order - 1 - i] = xi;
        rule.weights[i] = lambda;
        rule.weights[order - 1 - i] = lambda;
    }
    if (order % 2 == 1) {
        rule.nodes[half - 1] = 0.0;
    }

    // Renormalise so the weights sum to one to rounding.
    double total = 0.0;
    for (double w : rule.weights) total += w;
    for (double& w : rule.weights) w /= total;
    return rule;
}

double normal_moment(int power) {
    if (power < 0) throw std::invalid_argument("normal_moment: negative power");
    if (power % 2 == 1) return 0.0;
    double m = 1.0;
    for (int k = power - 1; k > 1; k -= 2) m *= k;
    return m;
}

double moment_defect(const QuadratureRule& rule) {
    return std::abs(normal_moment(2 * rule.order) - rule.moment(2 * rule.order));
}

}  // namespace sldual
