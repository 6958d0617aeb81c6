#pragma once

#include "sldual/duality.hpp"
#include "sldual/market.hpp"
#include "sldual/quadrature.hpp"
#include "sldual/utility.hpp"

namespace sldual {

/// Explicit constants of the a priori analysis, built from the coefficient
/// bounds C_mu, C_psi, the horizon T and the quadrature order M.
class ConstantSet {
public:
    ConstantSet(double c_mu, double c_psi, double horizon, int order);
    ConstantSet(const CoefficientBounds& bounds, double horizon, int order)
        : ConstantSet(bounds.drift, bounds.vol, horizon, order) {}

    /// C_mu^2 T + C_psi^2
    [[nodiscard]] double k1() const;
    /// C_mu^2 xi + 4 C_psi^2
    [[nodiscard]] double k2(double xi) const;
    /// 3 (x^2 + 2 K2(T) T) exp(6 K2(T) T)
    [[nodiscard]] double k3(double x) const;
    /// 2M C1 2^{2M} + M (2M-1) C1^2 2^{2M-2}, C1 = max(C_mu, C_psi)
    [[nodiscard]] double k4() const;
    /// (3 + 9 K1 T exp(3 K1 T))^{1/2}
    [[nodiscard]] double k5() const;

    [[nodiscard]] double c_mu() const { return c_mu_; }
    [[nodiscard]] double c_psi() const { return c_psi_; }
    [[nodiscard]] double horizon() const { return horizon_; }
    [[nodiscard]] int order() const { return order_; }

private:
    double c_mu_;
    double c_psi_;
    double horizon_;
    int order_;
};

enum class EmVariant {
    multiplicative,  // the sharper estimate for wealth-proportional coefficients
    general,
};

/// Euler-Maruyama part of the a priori error. The multiplicative variant is
///   L (24 K1 T C_psi^2 x^2 (1 + 4 K1 T e^{4 K1 T}))^{1/2} h^{1/2};
/// the general one is
///   L (8 K1 (1 + 2 K2(h)) (1 + K3(x)) (1 + 8 K1 T e^{8 K1 T}))^{1/2} h^{1/2}.
[[nodiscard]] double em_bound(double h, double x, double lipschitz, const CoefficientBounds& bounds,
                              double horizon, EmVariant variant = EmVariant::multiplicative);

enum class GhMoment {
    simplified,  // E[X^{2M}] replaced by x^{2M}
    full,        // x^{2M} e^{K4 T} + K4 T
};

/// Gauss-Hermite part of the a priori error:
///   L K5 h^{(M-1)/2M} 2^{2M-1}/(2M)! C_psi^{2M} ((2M-1)!! + defect) (1 + x^{2M}).
/// Throws std::invalid_argument when rule.order != order.
[[nodiscard]] double gh_bound(double h, double x, int order, double lipschitz,
                              const CoefficientBounds& bounds, double horizon,
                              const QuadratureRule& rule, GhMoment moment = GhMoment::simplified);

struct TailBounds {
    double upper_tail = 1.0;  // bound on P[X_t >= rho]
    double lower_tail = 1.0;  // bound on P[X_t <= c0 / rho]
};

/// Large-deviation bounds 2 exp(-3/(8 gamma^2 T) (log(rho/x) - mu T)^2), with
/// log(rho x/c0) for the lower tail (the upper bound applied to 1/X from 1/x
/// with threshold rho/c0); each is 1 when its log term does not exceed mu T,
/// and clamped at 1 otherwise.
[[nodiscard]] TailBounds tail_bounds(double x, double rho, double c0, double mu, double gamma,
                                     double horizon);

/// delta(x, rho) = U(c0/rho) P_lower + U'(rho) sum_{k >= floor(rho)} P_upper(k),
/// with mu the log-drift bound and gamma = C_psi from the model. The tail sum
/// stops once a term drops below 1e-16; after 1e6 direct terms the remainder
/// is bounded by dyadic blocks.
[[nodiscard]] double delta_allowance(double x, double rho, double c0, const MarketModel& model,
                                     const Utility& utility);
/// Same with precomputed coefficient bounds.
[[nodiscard]] double delta_allowance(double x, double rho, double c0, const CoefficientBounds& bounds,
                                     double horizon, const Utility& utility);

/// Default C for the a posteriori enclosure:
///   C_GH + C_EM T^{1/(2M)} + T
/// with C_GH = gh_bound / (L h^{(M-1)/2M} (1 + x^{2M})) and
/// C_EM = em_bound / (L x h^{1/2}). Uses h^{1/2} <= T^{1/(2M)} h^{(M-1)/2M},
/// x <= 1 + x^{2M}, and T for the accumulated interpolation error N dx = T dx/h.
[[nodiscard]] double scheme_constant(const CoefficientBounds& bounds, double horizon,
                                     const QuadratureRule& rule);

/// Constants of the a posteriori enclosure for one discretisation level:
/// C from the primal coefficient bounds, C~ from the dual ones (same formula),
/// L_rho from the truncated utility and L~_rho = rho from its conjugate.
[[nodiscard]] BoundConstants default_bound_constants(const MarketModel& model, const Utility& utility,
                                                     const QuadratureRule& rule, double h, double dx);

}  // namespace sldual
