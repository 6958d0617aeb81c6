#pragma once

#include <span>
#include <vector>

namespace sldual {

/// M-point Gauss-Hermite rule rescaled to the standard normal density:
///   E[f(Z)] ~ sum_i weights[i] * f(nodes[i]),  Z ~ N(0,1).
/// Nodes are ascending and symmetric about zero, weights are positive and
/// sum to one.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    /// sum_i weights[i] * nodes[i]^power, accumulated left to right.
    [[nodiscard]] double moment(int power) const;
};

/// Builds the rule from the roots of the physicists' Hermite polynomial H_M
/// (Newton iteration on the orthonormal three-term recurrence), then rescales
/// nodes by sqrt(2) and weights by 1/sqrt(pi).
///
/// Throws std::invalid_argument for M outside [2, 20] and NumericalFailure
/// if a root does not converge within 100 Newton steps.
[[nodiscard]] QuadratureRule gauss_hermite_rule(int order);

/// E[Z^power] for Z ~ N(0,1): (power-1)!! for even power, 0 for odd.
[[nodiscard]] double normal_moment(int power);

/// |(2M-1)!! - sum_i weights[i] * nodes[i]^(2M)|, the first moment the rule
/// does not integrate exactly.
[[nodiscard]] double moment_defect(const QuadratureRule& rule);

}  // namespace sldual
