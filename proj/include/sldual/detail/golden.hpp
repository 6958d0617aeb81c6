#pragma once

#include <cmath>
#include <utility>

namespace sldual::detail {

struct GoldenResult {
    double argmax;
    double value;
};

/// Golden-section search for the maximum of a unimodal (e.g. concave)
/// function on [lo, hi]. Stops when the bracket is below `tolerance` or after
/// `max_iterations` shrinks.
template <typename F>
GoldenResult golden_section_maximize(F&& f, double lo, double hi, double tolerance = 1e-13,
                                     int max_iterations = 200) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iterations && (b - a) > tolerance * (1.0 + std::abs(a) + std::abs(b));
         ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

/// Scans `mesh` for the largest objective value (smallest index on ties),
/// then refines inside the cell pair around the maximiser with a golden-section
/// pass. The refined value is only accepted if it improves on the scan.
template <typename F, typename Mesh>
GoldenResult scan_and_refine_max(F&& f, const Mesh& mesh) {
    std::size_t best = 0;
    double best_value = f(mesh[0]);
    for (std::size_t k = 1; k < mesh.size(); ++k) {
        const double v = f(mesh[k]);
        if (v > best_value) {
            best_value = v;
            best = k;
        }
    }
    GoldenResult result{mesh[best], best_value};
    if (mesh.size() < 2) return result;
    const double lo = mesh[best == 0 ? 0 : best - 1];
    const double hi = mesh[best + 1 < mesh.size() ? best + 1 : best];
    if (hi > lo) {
        const auto refined = golden_section_maximize(f, lo, hi);
        if (refined.value > result.value) result = refined;
    }
    return result;
}

}  // namespace sldual::detail
