#include "sldual/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sldual/detail/golden.hpp"

namespace sldual {

namespace {

constexpr double kMembershipSlack = 1e-12;
constexpr int kTimeSamples = 33;

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        out[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    }
    return out;
}

std::vector<double> sample_times(const MarketModel& model) {
    return linspace(0.0, model.horizon, kTimeSamples);
}

// Samples an interval at spacing no coarser than `spacing` (at least 2 points).
std::vector<double> dense_mesh(const Interval& set, double spacing) {
    if (set.degenerate()) return {set.lo};
    const int count = std::max(2, static_cast<int>(std::ceil((set.hi - set.lo) / spacing)) + 1);
    return linspace(set.lo, set.hi, count);
}

void require_in(const Interval& set, double v, const char* what) {
    if (!(v >= set.lo - kMembershipSlack && v <= set.hi + kMembershipSlack)) {
        throw std::invalid_argument(std::string(what) + " " + std::to_string(v) +
                                    " lies outside [" + std::to_string(set.lo) + ", " +
                                    std::to_string(set.hi) + "]");
    }
}

double positive_sigma(const MarketModel& model, double t) {
    const double s = model.sigma(t);
    if (s == 0.0) throw std::invalid_argument("uniform ellipticity violated: sigma(t) = 0");
    return s;
}

}  // namespace

bool Interval::contains(double v) const {
    return v >= lo - kMembershipSlack && v <= hi + kMembershipSlack;
}

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

void validate(const MarketModel& model) {
    if (!model.r || !model.b || !model.sigma || !model.g) {
        throw std::invalid_argument("MarketModel '" + model.name + "': missing coefficient function");
    }
    if (!(model.horizon > 0.0)) throw std::invalid_argument("MarketModel: horizon must be positive");
    if (!(model.controls.lo <= model.controls.hi) || !model.controls.contains(0.0)) {
        throw std::invalid_argument("MarketModel: control set must be an interval containing 0");
    }
    if (!(model.dual_controls.lo <= model.dual_controls.hi) || !model.dual_controls.bounded()) {
        throw std::invalid_argument("MarketModel: dual control set must be a bounded interval");
    }
    for (double t : sample_times(model)) {
        const double s = model.sigma(t);
        if (!(s * s > 0.0)) {
            throw std::invalid_argument("MarketModel: sigma(t)^2 must be bounded away from zero");
        }
    }
    if (model.controls.bounded() && !model.controls.degenerate()) {
        const auto mesh = linspace(model.controls.lo, model.controls.hi, 201);
        for (double t : sample_times(model)) {
            for (std::size_t k = 1; k + 1 < mesh.size(); ++k) {
                const double second = model.g(t, mesh[k - 1]) - 2.0 * model.g(t, mesh[k]) +
                                      model.g(t, mesh[k + 1]);
                if (second > 1e-10) {
                    throw std::invalid_argument("MarketModel: g(t, .) is not concave on A");
                }
            }
        }
    }
}

double primal_drift(const MarketModel& model, double t, double x, double a) {
    require_in(model.controls, a, "control");
    return x * (model.r(t) + a * (model.b(t) - model.r(t)) + model.g(t, a));
}

double primal_vol(const MarketModel& model, double t, double x, double a) {
    require_in(model.controls, a, "control");
    return x * a * model.sigma(t);
}

double g_tilde(const MarketModel& model, double t, double nu, std::span<const double> control_mesh) {
    if (control_mesh.empty()) throw std::invalid_argument("g_tilde: empty control mesh");
    const auto objective = [&](double a) { return model.g(t, a) - a * nu; };
    return detail::scan_and_refine_max(objective, control_mesh).value;
}

double g_tilde(const MarketModel& model, double t, double nu) {
    if (!model.controls.bounded()) throw std::invalid_argument("g_tilde: control set is unbounded");
    const auto mesh = model.controls.degenerate()
                          ? std::vector<double>{model.controls.lo}
                          : linspace(model.controls.lo, model.controls.hi, 2001);
    return g_tilde(model, t, nu, mesh);
}

double dual_drift(const MarketModel& model, double t, double y, double gamma) {
    require_in(model.dual_controls, gamma, "dual control");
    return -(model.r(t) + g_tilde(model, t, gamma)) * y;
}

double dual_vol(const MarketModel& model, double t, double y, double gamma) {
    require_in(model.dual_controls, gamma, "dual control");
    const double s = positive_sigma(model, t);
    // (sigma sigma^T)^{-1} (r - b - gamma) sigma reduces to (r - b - gamma) / sigma for d = 1.
    return y * (model.r(t) - model.b(t) - gamma) / s;
}

MarketModel cuoco_liu_model(const CuocoLiuParams& p) {
    if (!(p.lambda_minus >= 0.0) || !(p.lambda_plus >= 0.0 && p.lambda_plus <= 1.0) ||
        !(p.R >= p.r) || !(p.iota >= 0.0 && p.iota <= 1.0)) {
        throw std::invalid_argument(
            "cuoco_liu_model: requires lambda_- >= 0, lambda_+ in [0,1], R >= r, iota in [0,1]");
    }
    const double inf = std::numeric_limits<double>::infinity();
    MarketModel m;
    m.name = "cuoco-liu";
    m.r = [r = p.r](double) { return r; };
    m.b = [b = p.b](double) { return b; };
    m.sigma = [s = p.sigma](double) { return s; };
    m.g = [p](double, double a) {
        const double short_part = std::max(0.0, -a);
        const double long_part = std::max(0.0, a);
        return -p.r * (1.0 + p.iota * p.lambda_minus) * short_part -
               (p.R - p.r) * (1.0 - long_part - p.iota * p.lambda_minus * short_part);
    };
    m.controls = {p.lambda_minus > 0.0 ? -1.0 / p.lambda_minus : -inf,
                  p.lambda_plus > 0.0 ? 1.0 / p.lambda_plus : inf};
    m.dual_controls = p.dual_controls;
    m.horizon = p.horizon;
    validate(m);
    return m;
}

MarketModel merton_model(const MertonParams& p) {
    if (!(p.p > 0.0 && p.p < 1.0)) throw std::invalid_argument("merton_model: p must lie in (0,1)");
    if (p.sigma == 0.0) throw std::invalid_argument("merton_model: sigma must be nonzero");
    MarketModel m;
    m.name = "merton";
    m.r = [r = p.r](double) { return r; };
    m.b = [b = p.b](double) { return b; };
    m.sigma = [s = p.sigma](double) { return s; };
    m.g = [](double, double) { return 0.0; };
    m.controls = p.controls;
    m.dual_controls = {0.0, 0.0};
    m.horizon = p.horizon;
    validate(m);
    return m;
}

double merton_optimal_control(const MertonParams& p) {
    if (p.sigma == 0.0 || !(p.p > 0.0 && p.p < 1.0)) {
        throw std::invalid_argument("merton_optimal_control: needs sigma != 0 and p in (0,1)");
    }
    return (p.b - p.r) / (p.sigma * p.sigma * (1.0 - p.p));
}

double merton_closed_form(const MertonParams& p, double tau, double x) {
    const double a = merton_optimal_control(p);
    const double rate = a * (p.b - p.r) + p.r - 0.5 * a * a * (1.0 - p.p) * p.sigma * p.sigma;
    return std::exp(p.p * tau * rate) * std::pow(x, p.p) / p.p;
}

CoefficientBounds coefficient_bounds(const MarketModel& model) {
    if (!model.controls.bounded()) {
        throw std::invalid_argument("coefficient_bounds: control set must be bounded");
    }
    const auto times = sample_times(model);
    const auto mesh = dense_mesh(model.controls, 1e-4);
    CoefficientBounds out;
    for (double t : times) {
        const double r = model.r(t);
        const double b = model.b(t);
        const double s = model.sigma(t);
        double prev_g = 0.0;
        for (std::size_t k = 0; k < mesh.size(); ++k) {
            const double a = mesh[k];
            const double g = model.g(t, a);
            const double mu = r + a * (b - r) + g;
            out.drift = std::max(out.drift, std::abs(mu));
            out.vol = std::max(out.vol, std::abs(a * s));
            out.log_drift = std::max(out.log_drift, std::abs(mu - 0.5 * a * a * s * s));
            if (k > 0) {
                out.lipschitz_g = std::max(out.lipschitz_g, std::abs(g - prev_g) / (a - mesh[k - 1]));
            }
            prev_g = g;
        }
    }
    // Holder-1/2 constants in time, over sampled pairs.
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = i + 1; j < times.size(); ++j) {
            const double root = std::sqrt(times[j] - times[i]);
            const double coeff = std::abs(model.r(times[i]) - model.r(times[j])) +
                                 std::abs(model.b(times[i]) - model.b(times[j])) +
                                 std::abs(model.sigma(times[i]) - model.sigma(times[j]));
            out.holder_time = std::max(out.holder_time, coeff / root);
            for (double a : {model.controls.lo, 0.0, model.controls.hi}) {
                out.lipschitz_g = std::max(
                    out.lipschitz_g, std::abs(model.g(times[i], a) - model.g(times[j], a)) / root);
            }
        }
    }
    return out;
}

CoefficientBounds dual_coefficient_bounds(const MarketModel& model) {
    if (!model.controls.bounded()) {
        throw std::invalid_argument("dual_coefficient_bounds: control set must be bounded");
    }
    const auto times = linspace(0.0, model.horizon, 9);
    const auto gammas = dense_mesh(model.dual_controls, 5e-3);
    const auto a_mesh = model.controls.degenerate()
                            ? std::vector<double>{model.controls.lo}
                            : linspace(model.controls.lo, model.controls.hi, 2001);
    CoefficientBounds out;
    for (double t : times) {
        const double r = model.r(t);
        const double b = model.b(t);
        const double s = positive_sigma(model, t);
        for (double gamma : gammas) {
            const double drift = r + g_tilde(model, t, gamma, a_mesh);
            const double vol = (r - b - gamma) / s;
            out.drift = std::max(out.drift, std::abs(drift));
            out.vol = std::max(out.vol, std::abs(vol));
            out.log_drift = std::max(out.log_drift, std::abs(drift + 0.5 * vol * vol));
        }
    }
    return out;
}

}  // namespace sldual
