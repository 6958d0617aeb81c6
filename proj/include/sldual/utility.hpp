#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

namespace sldual {

enum class UtilityKind { power, truncated_power, custom, truncated_custom };

/// Parameters of the three-piece Lipschitz modification: linear on
/// [0, x_rho], the original utility on (x_rho, rho], constant beyond rho.
struct Truncation {
    double rho = 18.0;
    double c0 = 8.0;
    double x_rho = 0.0;      // c0 / rho
    double lipschitz = 0.0;  // (U(x_rho) - U(0)) / x_rho
};

/// Concave, nondecreasing utility on [0, inf), optionally Lipschitz-truncated.
class Utility {
public:
    using Function = std::function<double(double)>;

    Utility(Function value, Function derivative, std::string name);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double derivative(double x) const;

    /// The untruncated function, regardless of any truncation applied.
    [[nodiscard]] double base(double x) const { return value_(x); }
    [[nodiscard]] double base_derivative(double x) const { return derivative_(x); }

    [[nodiscard]] UtilityKind kind() const;
    [[nodiscard]] const std::optional<double>& exponent() const { return exponent_; }
    [[nodiscard]] const std::optional<Truncation>& truncation() const { return truncation_; }
    [[nodiscard]] bool is_truncated() const { return truncation_.has_value(); }
    [[nodiscard]] const std::string& name() const { return name_; }

    /// Lipschitz constant L_rho; throws Unsupported for an untruncated utility.
    [[nodiscard]] double lipschitz() const;

    /// Value of the constant branch beyond the truncation threshold, U(rho).
    [[nodiscard]] double plateau() const;

private:
    friend Utility power_utility(double p);
    friend Utility lipschitz_truncate(const Utility& u, double rho, double c0);

    Function value_;
    Function derivative_;
    std::string name_;
    std::optional<double> exponent_;
    std::optional<Truncation> truncation_;
};

/// U(x) = x^p / p for 0 < p < 1.
[[nodiscard]] Utility power_utility(double p);

/// Lipschitz truncation U_rho. Requires rho > 0, c0 > 0, c0/rho < rho and a
/// finite U(0) (Unsupported otherwise).
[[nodiscard]] Utility lipschitz_truncate(const Utility& u, double rho, double c0);

/// sup_{x >= 0} { U(x) - x y } by scanning `search_grid` and refining the best
/// cell with golden-section search. Accurate to L_U * (grid spacing) for
/// concave U, far better when the maximiser is interior.
[[nodiscard]] double convex_conjugate(const Utility& u, double y, std::span<const double> search_grid);

/// Convex conjugate of a truncated utility.
class ConjugateUtility {
public:
    [[nodiscard]] double operator()(double y) const;

    /// Lipschitz constant of the conjugate: y_rho = rho.
    [[nodiscard]] double lipschitz() const { return lipschitz_; }
    /// The conjugate equals U(0) for every y >= support_cutoff() (= L_rho).
    [[nodiscard]] double support_cutoff() const { return cutoff_; }
    /// Value beyond the cutoff, U(0).
    [[nodiscard]] double plateau() const { return plateau_; }

private:
    friend ConjugateUtility conjugate_spec(const Utility& u);
    std::function<double(double)> evaluate_;
    double lipschitz_ = 0.0;
    double cutoff_ = 0.0;
    double plateau_ = 0.0;
};

/// Packages the conjugate of a truncated utility: closed-form branches for the
/// truncated power family, grid search on [0, rho] otherwise. Throws
/// Unsupported when `u` is not truncated.
[[nodiscard]] ConjugateUtility conjugate_spec(const Utility& u);

}  // namespace sldual
