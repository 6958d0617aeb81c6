#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "sldual/config.hpp"
#include "sldual/market.hpp"
#include "sldual/utility.hpp"

namespace sldual {

/// Model, truncated terminal utility and optional closed-form value built
/// from a configuration.
struct Problem {
    MarketModel model;
    Utility utility;
    /// v(t = 0, x) when the model has one (Merton), empty otherwise.
    std::function<double(double)> reference;
};

[[nodiscard]] Problem build_problem(const ExperimentConfig& config);

struct RunRequest {
    std::string command;       // solve-primal | solve-dual | gap | convergence | bounds | polar-check
    std::string out_dir = ".";
    std::optional<int> level;  // defaults to k_max for single-level commands
    std::optional<std::string> mode;  // overrides the config's error|gap
};

/// Runs one pipeline and returns the path of the CSV it wrote. Every CSV
/// starts with a `# ` line echoing the resolved configuration. Progress
/// lines go to `log`.
std::string run_pipeline(const ExperimentConfig& config, const RunRequest& request, std::ostream& log);

/// Loads the configuration, runs the pipeline and maps failures to exit
/// codes: 0 success, 2 configuration error, 3 numerical failure or resource
/// limit, 1 anything else.
int run_from_file(const std::string& config_path, const RunRequest& request, std::ostream& log,
                  std::ostream& err);

}  // namespace sldual
