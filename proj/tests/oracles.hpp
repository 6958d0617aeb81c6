#pragma once

// Reference computations written independently of the library code paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

/// sup_x {f(x) - x y} over a uniform grid on [0, x_hi].
inline double brute_conjugate(const std::function<double(double)>& f, double y, double x_hi,
                              double spacing) {
    const long count = static_cast<long>(std::ceil(x_hi / spacing));
    double best = f(0.0);
    for (long i = 1; i <= count; ++i) {
        const double x = std::min(x_hi, i * spacing);
        best = std::max(best, f(x) - x * y);
    }
    return best;
}

/// E[U(X_tau)] for dX = X (r + a (b - r)) dt + X a sigma dB with constant a,
/// sampled exactly from the lognormal law. Returns {mean, standard error}.
struct McResult {
    double mean;
    double stderr_;
};

inline McResult merton_monte_carlo(double p, double r, double b, double sigma, double a, double tau,
                                   double x, long paths, unsigned long seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double drift = (r + a * (b - r) - 0.5 * a * a * sigma * sigma) * tau;
    const double vol = a * sigma * std::sqrt(tau);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long i = 0; i < paths; ++i) {
        const double xt = x * std::exp(drift + vol * normal(gen));
        const double u = std::pow(xt, p) / p;
        sum += u;
        sum_sq += u * u;
    }
    const double mean = sum / paths;
    const double var = sum_sq / paths - mean * mean;
    return {mean, std::sqrt(var / paths)};
}

/// Linear interpolation on x_m = m dx with the left cell extended below 0 and
/// a constant beyond x_max, located by binary search.
inline double lattice_interp(const std::vector<double>& v, double dx, double x, double plateau) {
    const double x_max = dx * (v.size() - 1);
    if (x > x_max) return plateau;
    if (x < 0.0) return v[0] + (v[1] - v[0]) / dx * x;
    std::vector<double> nodes(v.size());
    for (std::size_t m = 0; m < v.size(); ++m) nodes[m] = m * dx;
    nodes.back() = x_max;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - nodes.begin());
    if (hi >= v.size()) return v.back();
    const std::size_t lo = hi - 1;
    const double w = (x - nodes[lo]) / (nodes[hi] - nodes[lo]);
    return (1.0 - w) * v[lo] + w * v[hi];
}

struct Control {
    double drift;  // per-unit-state drift coefficient
    double vol;    // per-unit-state volatility coefficient
};

/// Fully discrete value at (t_step, x) evaluated as an exhaustive tree: each
/// level re-evaluates the whole next row by recursing through every
/// (control, branch) pair. Exponential cost, tiny instances only.
inline double lattice_tree(int step, int steps, double x, const std::vector<double>& grid_x, double dx,
                           double h, const std::vector<Control>& controls,
                           const std::vector<double>& xi, const std::vector<double>& lambda,
                           const std::function<double(double)>& terminal, double plateau, bool maximize) {
    if (step == steps) return terminal(x);
    std::vector<double> next(grid_x.size());
    for (std::size_t m = 0; m < grid_x.size(); ++m) {
        next[m] = m == 0 ? std::numeric_limits<double>::quiet_NaN()
                         : lattice_tree(step + 1, steps, grid_x[m], grid_x, dx, h, controls, xi,
                                        lambda, terminal, plateau, maximize);
    }
    // x_0 = 0 is absorbing: its value at every time is the terminal value.
    next[0] = terminal(0.0);
    if (x == 0.0) return next[0];
    double best = maximize ? -INFINITY : INFINITY;
    for (const Control& c : controls) {
        double acc = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            const double target = x + h * x * c.drift + std::sqrt(h) * x * c.vol * xi[i];
            acc += lambda[i] * lattice_interp(next, dx, target, plateau);
        }
        best = maximize ? std::max(best, acc) : std::min(best, acc);
    }
    return best;
}

/// Semidiscrete value (no interpolation): exhaustive (control, branch) tree
/// with the plateau convention beyond x_max.
inline double scenario_tree(int step, int steps, double x, double x_max, double h,
                            const std::vector<Control>& controls, const std::vector<double>& xi,
                            const std::vector<double>& lambda,
                            const std::function<double(double)>& terminal, double plateau,
                            bool maximize) {
    if (x > x_max) return plateau;
    if (step == steps) return terminal(x);
    if (x == 0.0) return terminal(0.0);
    double best = maximize ? -INFINITY : INFINITY;
    for (const Control& c : controls) {
        double acc = 0.0;
        for (std::size_t i = 0; i < xi.size(); ++i) {
            const double target = x + h * x * c.drift + std::sqrt(h) * x * c.vol * xi[i];
            acc += lambda[i] * scenario_tree(step + 1, steps, target, x_max, h, controls, xi, lambda,
                                             terminal, plateau, maximize);
        }
        best = maximize ? std::max(best, acc) : std::min(best, acc);
    }
    return best;
}

/// sup over a uniform mesh of 10^4 + 1 points of g(a) - a nu.
inline double brute_g_tilde(const std::function<double(double)>& g, double lo, double hi, double nu) {
    double best = -INFINITY;
    const int count = 10000;
    for (int i = 0; i <= count; ++i) {
        const double a = lo + (hi - lo) * i / count;
        best = std::max(best, g(a) - a * nu);
    }
    return best;
}

}  // namespace oracle
