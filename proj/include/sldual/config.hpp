#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sldual {

enum class ProblemKind { merton, cuoco_liu, custom };

/// Resolved experiment settings. Model keys of the named problem are
/// mandatory; discretisation and output keys fall back to the defaults below.
struct ExperimentConfig {
    ProblemKind problem = ProblemKind::merton;

    // Market
    double p = 0.5;
    double r = 0.8;
    double b = 1.2;
    double sigma = 1.0;
    double horizon = 0.5;  // key T
    double x_max = 20.0;
    double R = 1.0;
    double iota = 0.5;
    double lambda_plus = 1.0;
    double lambda_minus = 1.0;
    double a_min = -1.0;
    double a_max = 1.0;
    double gamma_min = 0.0;
    double gamma_max = 0.0;

    // Discretisation
    int M = 4;
    int k_min = 1;
    int k_max = 5;
    int base_N = 4;
    double coupling = 11.0 / 8.0;
    double rho = 18.0;
    double c0 = 8.0;
    double y_max = 0.0;  // 0 means "auto": the dual grid matches the primal one
    bool include_zero_dual_node = true;

    // Reporting
    double window_lo = 1.0;   // local error window
    double window_hi = 2.0;
    double gap_window_lo = 0.0;
    double gap_window_hi = 0.0;  // 0 means x_max
    bool gap_at_terminal = false;
    bool lipschitz_mode = false;  // delta(x, rho) = 0
    double bound_x = 1.0;
    std::vector<int> polar_steps{2, 4, 8};
    double polar_x = 1.0;
    double polar_y = 1.0;
    double polar_a = 0.0;
    double polar_gamma = 0.0;
    unsigned long seed = 12345;
    std::string mode = "error";
    bool timing = false;

    /// `key=value` pairs of every resolved setting, sorted by key.
    [[nodiscard]] std::string echo() const;
};

/// Raw `key = value` pairs; `#` starts a comment. Throws ConfigError on a
/// line without '=' or a repeated key.
[[nodiscard]] std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Builds and checks the configuration. Unknown keys are reported together,
/// missing model keys by name; inconsistent values (k_min > k_max, a
/// non-positive coupling exponent, rho^2 <= c0, ...) raise ConfigError.
[[nodiscard]] ExperimentConfig resolve_config(const std::map<std::string, std::string>& raw);

[[nodiscard]] ExperimentConfig load_config(const std::string& path);

[[nodiscard]] const char* problem_name(ProblemKind kind);

}  // namespace sldual
