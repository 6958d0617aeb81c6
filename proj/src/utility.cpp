#include "sldual/utility.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sldual/detail/golden.hpp"
#include "sldual/error.hpp"

namespace sldual {

Utility::Utility(Function value, Function derivative, std::string name)
    : value_(std::move(value)), derivative_(std::move(derivative)), name_(std::move(name)) {
    if (!value_ || !derivative_) {
        throw std::invalid_argument("Utility: value and derivative must be callable");
    }
}

double Utility::operator()(double x) const {
    if (!truncation_) return value_(x);
    const Truncation& tr = *truncation_;
    if (x <= tr.x_rho) return value_(0.0) + tr.lipschitz * x;
    if (x <= tr.rho) return value_(x);
    return value_(tr.rho);
}

double Utility::derivative(double x) const {
    if (!truncation_) return derivative_(x);
    const Truncation& tr = *truncation_;
    if (x <= tr.x_rho) return tr.lipschitz;
    if (x <= tr.rho) return derivative_(x);
    return 0.0;
}

UtilityKind Utility::kind() const {
    if (exponent_) return truncation_ ? UtilityKind::truncated_power : UtilityKind::power;
    return truncation_ ? UtilityKind::truncated_custom : UtilityKind::custom;
}

double Utility::lipschitz() const {
    if (!truncation_) throw Unsupported("Utility '" + name_ + "' is not Lipschitz-truncated");
    return truncation_->lipschitz;
}

double Utility::plateau() const {
    if (!truncation_) throw Unsupported("Utility '" + name_ + "' has no constant branch");
    return value_(truncation_->rho);
}

Utility power_utility(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("power_utility: exponent must lie in (0, 1)");
    }
    Utility u(
        [p](double x) { return x <= 0.0 ? 0.0 : std::pow(x, p) / p; },
        [p](double x) {
            return x <= 0.0 ? std::numeric_limits<double>::infinity() : std::pow(x, p - 1.0);
        },
        "power");
    u.exponent_ = p;
    return u;
}

Utility lipschitz_truncate(const Utility& u, double rho, double c0) {
    if (!(rho > 0.0) || !(c0 > 0.0)) {
        throw std::invalid_argument("lipschitz_truncate: rho and c0 must be positive");
    }
    const double x_rho = c0 / rho;
    if (!(x_rho < rho)) {
        throw std::invalid_argument("lipschitz_truncate: requires c0/rho < rho");
    }
    const double u0 = u.base(0.0);
    if (!std::isfinite(u0)) {
        throw Unsupported("lipschitz_truncate: utilities unbounded at zero are not supported");
    }
    Utility out = u;
    out.truncation_ = Truncation{rho, c0, x_rho, (u.base(x_rho) - u0) / x_rho};
    out.name_ = u.name() + "-truncated";
    return out;
}

double convex_conjugate(const Utility& u, double y, std::span<const double> search_grid) {
    if (search_grid.empty()) throw std::invalid_argument("convex_conjugate: empty search grid");
    if (!(y > 0.0)) throw std::invalid_argument("convex_conjugate: y must be positive");
    const auto objective = [&](double x) { return u(x) - x * y; };
    return detail::scan_and_refine_max(objective, search_grid).value;
}

double ConjugateUtility::operator()(double y) const {
    if (y < 0.0) throw std::invalid_argument("ConjugateUtility: y must be nonnegative");
    if (y >= cutoff_) return plateau_;
    return evaluate_(y);
}

ConjugateUtility conjugate_spec(const Utility& u) {
    if (!u.is_truncated()) {
        throw Unsupported("conjugate_spec: the conjugate is only provided for truncated utilities");
    }
    const Truncation tr = *u.truncation();
    ConjugateUtility out;
    out.lipschitz_ = tr.rho;
    out.cutoff_ = tr.lipschitz;
    out.plateau_ = u.base(0.0);

    if (u.exponent()) {
        const double p = *u.exponent();
        const double u0 = u.base(0.0);
        const double u_xr = u.base(tr.x_rho);
        const double u_rho = u.base(tr.rho);
        const double slope_xr = std::pow(tr.x_rho, p - 1.0);  // U'(x_rho)
        const double slope_rho = std::pow(tr.rho, p - 1.0);   // U'(rho)
        const double lip = tr.lipschitz;
        out.evaluate_ = [=](double y) {
            if (y >= lip) return u0;
            if (y >= slope_xr) return u_xr - tr.x_rho * y;
            if (y > slope_rho) {
                const double x_star = std::pow(y, 1.0 / (p - 1.0));
                return std::pow(x_star, p) / p - x_star * y;
            }
            return u_rho - tr.rho * y;
        };
        return out;
    }

    constexpr int kSearchPoints = 20001;
    auto grid = std::make_shared<std::vector<double>>(kSearchPoints);
    for (int i = 0; i < kSearchPoints; ++i) {
        (*grid)[i] = tr.rho * static_cast<double>(i) / (kSearchPoints - 1);
    }
    out.evaluate_ = [u, grid](double y) {
        if (y == 0.0) return u(u.truncation()->rho);
        return convex_conjugate(u, y, *grid);
    };
    return out;
}

}  // namespace sldual
