#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sldual {

/// Closed control interval [lo, hi]; infinite endpoints mark an unbounded set.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double v) const;
    [[nodiscard]] bool bounded() const;
    [[nodiscard]] bool degenerate() const { return lo == hi; }
};

/// Scalar (d = 1) wealth dynamics
///   dX = X (r + a (b - r) + g(t, a)) dt + X a sigma dB,   a in A,
/// and the associated dual state-price dynamics with controls in Gamma.
struct MarketModel {
    std::function<double(double)> r;
    std::function<double(double)> b;
    std::function<double(double)> sigma;
    std::function<double(double, double)> g;  // (t, a) -> friction
    Interval controls;                        // A
    Interval dual_controls;                   // Gamma
    double horizon = 0.0;                     // T
    std::string name;
};

/// Checks 0 in A, a positive horizon, sigma^2 bounded away from zero and
/// concavity of g(t, .) on sampled grids. Throws std::invalid_argument.
void validate(const MarketModel& model);

/// Primal drift x (r + a (b - r) + g(t, a)); throws if a is outside A.
[[nodiscard]] double primal_drift(const MarketModel& model, double t, double x, double a);
/// Primal volatility x a sigma(t).
[[nodiscard]] double primal_vol(const MarketModel& model, double t, double x, double a);

/// g~(t, nu) = sup_{a in A} { g(t, a) - a nu }, evaluated by a scan of
/// `control_mesh` and one golden-section refinement on the best cell.
[[nodiscard]] double g_tilde(const MarketModel& model, double t, double nu,
                             std::span<const double> control_mesh);
/// Same with a 2001-point mesh on A.
[[nodiscard]] double g_tilde(const MarketModel& model, double t, double nu);

/// Dual drift -(r + g~(t, gamma)) y.
[[nodiscard]] double dual_drift(const MarketModel& model, double t, double y, double gamma);
/// Dual volatility y (r - b - gamma) / sigma(t).
[[nodiscard]] double dual_vol(const MarketModel& model, double t, double y, double gamma);

struct CuocoLiuParams {
    double r = 0.8;
    double R = 1.0;  // borrowing rate
    double b = 1.2;
    double sigma = 0.5;
    double horizon = 0.5;
    double iota = 0.5;
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
    Interval dual_controls{-1.0, 1.0};
};

/// Nonlinear dynamics with different borrowing and lending rates and margin
/// constraints: A = [-1/lambda_minus, 1/lambda_plus] and
///   g(a) = -r (1 + iota lambda_-) max(0,-a) - (R - r)(1 - max(0,a) - iota lambda_- max(0,-a)).
/// Note g(0) = -(R - r) is not zero; the model is accepted as stated.
[[nodiscard]] MarketModel cuoco_liu_model(const CuocoLiuParams& params);

struct MertonParams {
    double p = 0.5;
    double r = 0.8;
    double b = 1.2;
    double sigma = 1.0;
    double horizon = 0.5;
    Interval controls{-1.0, 1.0};
};

/// Constant-coefficient Merton market with g = 0 and Gamma = {0}.
[[nodiscard]] MarketModel merton_model(const MertonParams& params);
/// a* = (b - r) / (sigma^2 (1 - p)).
[[nodiscard]] double merton_optimal_control(const MertonParams& params);
/// v at time-to-maturity tau for the untruncated power utility:
///   exp{p tau (a* (b - r) + r - (a*)^2 (1 - p) sigma^2 / 2)} x^p / p.
[[nodiscard]] double merton_closed_form(const MertonParams& params, double tau, double x);

/// Growth constants of the drift/volatility coefficients, from dense sampling.
struct CoefficientBounds {
    double drift = 0.0;      // C_mu = sup |r + a (b - r) + g|
    double vol = 0.0;        // C_psi = sup |a sigma|
    double log_drift = 0.0;  // sup |r + a (b - r) + g - a^2 sigma^2 / 2|
    double holder_time = 0.0;     // K0
    double lipschitz_g = 0.0;     // K1
};

/// Sup-norm bounds for the primal dynamics over sampled t and a (spacing 1e-4).
/// Throws std::invalid_argument if A is unbounded.
[[nodiscard]] CoefficientBounds coefficient_bounds(const MarketModel& model);

/// The same constants for the dual dynamics: drift r + g~(t, gamma) and
/// volatility (r - b - gamma) / sigma over Gamma.
[[nodiscard]] CoefficientBounds dual_coefficient_bounds(const MarketModel& model);

}  // namespace sldual
