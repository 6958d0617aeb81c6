#include "sldual/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sldual {

SpaceGrid::SpaceGrid(double x_max, int intervals) : x_max_(x_max), intervals_(intervals), dx_(0.0) {
    if (!(x_max > 0.0) || !std::isfinite(x_max)) {
        throw std::invalid_argument("SpaceGrid: x_max must be positive and finite");
    }
    if (intervals < 1) throw std::invalid_argument("SpaceGrid: need at least one interval");
    dx_ = x_max / intervals;
}

std::vector<double> SpaceGrid::nodes() const {
    std::vector<double> out(size());
    for (int m = 0; m <= intervals_; ++m) out[m] = node(m);
    return out;
}

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps), h_(0.0) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
    }
    if (steps < 0) throw std::invalid_argument("TimeGrid: step count must be nonnegative");
    h_ = steps == 0 ? 0.0 : horizon / steps;
}

LinearInterpolant::LinearInterpolant(const SpaceGrid& grid, std::span<const double> values,
                                     double plateau)
    : values_(values),
      dx_(grid.dx()),
      inv_dx_(1.0 / grid.dx()),
      x_max_(grid.x_max()),
      plateau_(plateau),
      last_(grid.intervals()) {
    if (values.size() != grid.size()) {
        throw std::invalid_argument("interpolate: expected " + std::to_string(grid.size()) +
                                    " values, got " + std::to_string(values.size()));
    }
    for (std::size_t m = 0; m < values.size(); ++m) {
        if (!std::isfinite(values[m])) {
            throw std::invalid_argument("interpolate: non-finite value at node " + std::to_string(m));
        }
    }
    if (!std::isfinite(plateau)) throw std::invalid_argument("interpolate: non-finite plateau");
}

double LinearInterpolant::operator()(double x) const {
    if (std::isnan(x)) return x;
    if (x > x_max_) return plateau_;
    if (x < 0.0) return values_[0] + (values_[1] - values_[0]) * (x * inv_dx_);
    const double s = x * inv_dx_;
    // Node queries return the stored value bit-for-bit.
    const int nearest = static_cast<int>(std::lround(s));
    if ((nearest == last_ && x == x_max_) || (nearest < last_ && x == nearest * dx_)) {
        return values_[nearest];
    }
    int cell = static_cast<int>(s);
    if (cell >= last_) cell = last_ - 1;
    const double w = s - cell;
    return values_[cell] + w * (values_[cell + 1] - values_[cell]);
}

double interpolate(const SpaceGrid& grid, std::span<const double> values, double x, double plateau) {
    return LinearInterpolant(grid, values, plateau)(x);
}

std::vector<double> control_mesh(double lo, double hi, int count) {
    if (count <= 0) throw std::invalid_argument("control_mesh: count must be positive");
    if (!(lo <= hi)) throw std::invalid_argument("control_mesh: requires lo <= hi");
    if (lo == hi) return {lo};
    if (count == 1) return {0.5 * (lo + hi)};
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    }
    out.back() = hi;
    return out;
}

}  // namespace sldual
