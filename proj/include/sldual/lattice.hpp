#pragma once

#include <span>
#include <vector>

namespace sldual {

/// Uniform grid x_m = m dx, m = 0..J, on [0, x_max].
class SpaceGrid {
public:
    SpaceGrid(double x_max, int intervals);

    [[nodiscard]] double dx() const { return dx_; }
    [[nodiscard]] int intervals() const { return intervals_; }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(intervals_) + 1; }
    [[nodiscard]] double x_max() const { return x_max_; }
    [[nodiscard]] double node(int m) const { return m == intervals_ ? x_max_ : m * dx_; }
    [[nodiscard]] std::vector<double> nodes() const;

    friend bool operator==(const SpaceGrid&, const SpaceGrid&) = default;

private:
    double x_max_;
    int intervals_;
    double dx_;
};

/// t_n = n h, n = 0..N, with h = T / N. N = 0 is allowed and carries only
/// the terminal time.
class TimeGrid {
public:
    TimeGrid(double horizon, int steps);

    [[nodiscard]] double h() const { return h_; }
    [[nodiscard]] int steps() const { return steps_; }
    [[nodiscard]] double horizon() const { return horizon_; }
    [[nodiscard]] double time(int n) const { return n == steps_ ? horizon_ : n * h_; }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double horizon_;
    int steps_;
    double h_;
};

/// Piecewise-linear interpolant of node values on a SpaceGrid. Left of x_0 the
/// first cell is extended linearly; right of x_max the interpolant returns the
/// configured plateau constant.
class LinearInterpolant {
public:
    /// Throws std::invalid_argument on a size mismatch or non-finite entries.
    LinearInterpolant(const SpaceGrid& grid, std::span<const double> values, double plateau);

    [[nodiscard]] double operator()(double x) const;

private:
    std::span<const double> values_;
    double dx_;
    double inv_dx_;
    double x_max_;
    double plateau_;
    int last_;
};

/// One-shot form of LinearInterpolant.
[[nodiscard]] double interpolate(const SpaceGrid& grid, std::span<const double> values, double x,
                                 double plateau);

/// `count` equally spaced points on [lo, hi] including both endpoints; the
/// midpoint when count == 1; a single point when lo == hi.
[[nodiscard]] std::vector<double> control_mesh(double lo, double hi, int count);

}  // namespace sldual
