#include "sldual/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "sldual/error.hpp"

namespace sldual {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Reader {
public:
    explicit Reader(const std::map<std::string, std::string>& raw) : raw_(raw) {}

    bool has(const std::string& key) const { return raw_.count(key) != 0; }

    void number(const std::string& key, double& out, bool required) {
        const auto it = find(key, required);
        if (it == raw_.end()) return;
        // Accept simple fractions such as 11/8.
        const std::string& text = it->second;
        const auto slash = text.find('/');
        if (slash != std::string::npos) {
            double num = 0.0;
            double den = 0.0;
            parse_double(key, trim(text.substr(0, slash)), num);
            parse_double(key, trim(text.substr(slash + 1)), den);
            if (den == 0.0) throw ConfigError("config key '" + key + "': zero denominator");
            out = num / den;
            return;
        }
        parse_double(key, text, out);
    }

    void integer(const std::string& key, int& out) {
        const auto it = find(key, false);
        if (it == raw_.end()) return;
        char* end = nullptr;
        errno = 0;
        const long v = std::strtol(it->second.c_str(), &end, 10);
        if (errno != 0 || end == it->second.c_str() || *end != '\0' || v < -1000000 || v > 1000000) {
            throw ConfigError("config key '" + key + "': expected an integer, got '" + it->second + "'");
        }
        out = static_cast<int>(v);
    }

    void flag(const std::string& key, bool& out) {
        const auto it = find(key, false);
        if (it == raw_.end()) return;
        if (it->second == "true" || it->second == "1" || it->second == "yes") {
            out = true;
        } else if (it->second == "false" || it->second == "0" || it->second == "no") {
            out = false;
        } else {
            throw ConfigError("config key '" + key + "': expected true or false, got '" +
                              it->second + "'");
        }
    }

    void missing_check(const std::vector<std::string>& required) const {
        std::string missing;
        for (const auto& key : required) {
            if (!has(key)) missing += (missing.empty() ? "" : ", ") + key;
        }
        if (!missing.empty()) throw ConfigError("missing config key(s): " + missing);
    }

private:
    std::map<std::string, std::string>::const_iterator find(const std::string& key, bool required) {
        const auto it = raw_.find(key);
        if (it == raw_.end() && required) throw ConfigError("missing config key: " + key);
        return it;
    }

    static void parse_double(const std::string& key, const std::string& text, double& out) {
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(text.c_str(), &end);
        if (errno != 0 || end == text.c_str() || *end != '\0') {
            throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
        }
        out = v;
    }

    const std::map<std::string, std::string>& raw_;
};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "problem",   "p",           "r",          "b",           "sigma",
        "T",         "x_max",       "R",          "iota",        "lambda_plus",
        "lambda_minus", "a_min",    "a_max",      "gamma_min",   "gamma_max",
        "M",         "k_min",       "k_max",      "base_N",      "coupling",
        "rho",       "c0",          "y_max",      "include_zero_dual_node",
        "window_lo", "window_hi",   "gap_window_lo", "gap_window_hi", "gap_time",
        "lipschitz_mode", "bound_x", "polar_steps", "polar_x",   "polar_y",
        "polar_a",   "polar_gamma", "seed",       "mode",        "timing"};
    return keys;
}

std::vector<int> parse_steps(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        char* end = nullptr;
        const long v = std::strtol(item.c_str(), &end, 10);
        if (item.empty() || *end != '\0' || v < 1 || v > 64) {
            throw ConfigError("config key 'polar_steps': expected positive integers, got '" + text + "'");
        }
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw ConfigError("config key 'polar_steps' is empty");
    return out;
}

}  // namespace

const char* problem_name(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::merton: return "merton";
        case ProblemKind::cuoco_liu: return "cuoco-liu";
        case ProblemKind::custom: return "custom";
    }
    return "unknown";
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
        if (!out.emplace(key, value).second) {
            throw ConfigError("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

ExperimentConfig resolve_config(const std::map<std::string, std::string>& raw) {
    std::string unknown;
    for (const auto& [key, value] : raw) {
        if (!known_keys().count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
    }
    if (!unknown.empty()) throw ConfigError("unknown config key(s): " + unknown);

    Reader rd(raw);
    rd.missing_check({"problem"});
    ExperimentConfig c;
    const std::string& problem = raw.at("problem");
    std::vector<std::string> required{"p", "r", "b", "sigma", "T", "x_max"};
    if (problem == "merton") {
        c.problem = ProblemKind::merton;
    } else if (problem == "cuoco-liu") {
        c.problem = ProblemKind::cuoco_liu;
        for (const char* k : {"R", "iota", "lambda_plus", "lambda_minus"}) required.emplace_back(k);
        c.gamma_min = -1.0;
        c.gamma_max = 1.0;
    } else if (problem == "custom") {
        c.problem = ProblemKind::custom;
    } else {
        throw ConfigError("config key 'problem': expected merton, cuoco-liu or custom, got '" +
                          problem + "'");
    }
    rd.missing_check(required);

    rd.number("p", c.p, true);
    rd.number("r", c.r, true);
    rd.number("b", c.b, true);
    rd.number("sigma", c.sigma, true);
    rd.number("T", c.horizon, true);
    rd.number("x_max", c.x_max, true);
    rd.number("R", c.R, false);
    rd.number("iota", c.iota, false);
    rd.number("lambda_plus", c.lambda_plus, false);
    rd.number("lambda_minus", c.lambda_minus, false);
    rd.number("a_min", c.a_min, false);
    rd.number("a_max", c.a_max, false);
    rd.number("gamma_min", c.gamma_min, false);
    rd.number("gamma_max", c.gamma_max, false);
    rd.integer("M", c.M);
    rd.integer("k_min", c.k_min);
    rd.integer("k_max", c.k_max);
    rd.integer("base_N", c.base_N);
    rd.number("coupling", c.coupling, false);
    rd.number("rho", c.rho, false);
    rd.number("c0", c.c0, false);
    if (rd.has("y_max") && raw.at("y_max") != "auto") rd.number("y_max", c.y_max, false);
    rd.flag("include_zero_dual_node", c.include_zero_dual_node);
    rd.number("window_lo", c.window_lo, false);
    rd.number("window_hi", c.window_hi, false);
    rd.number("gap_window_lo", c.gap_window_lo, false);
    rd.number("gap_window_hi", c.gap_window_hi, false);
    if (rd.has("gap_time")) {
        const std::string& when = raw.at("gap_time");
        if (when == "initial") {
            c.gap_at_terminal = false;
        } else if (when == "terminal") {
            c.gap_at_terminal = true;
        } else {
            throw ConfigError("config key 'gap_time': expected initial or terminal, got '" + when + "'");
        }
    }
    rd.flag("lipschitz_mode", c.lipschitz_mode);
    rd.number("bound_x", c.bound_x, false);
    if (rd.has("polar_steps")) c.polar_steps = parse_steps(raw.at("polar_steps"));
    rd.number("polar_x", c.polar_x, false);
    rd.number("polar_y", c.polar_y, false);
    rd.number("polar_a", c.polar_a, false);
    rd.number("polar_gamma", c.polar_gamma, false);
    if (rd.has("seed")) {
        int seed = 0;
        rd.integer("seed", seed);
        if (seed < 0) throw ConfigError("config key 'seed' must be nonnegative");
        c.seed = static_cast<unsigned long>(seed);
    }
    if (rd.has("mode")) c.mode = raw.at("mode");
    rd.flag("timing", c.timing);

    if (c.mode != "error" && c.mode != "gap") {
        throw ConfigError("config key 'mode': expected error or gap, got '" + c.mode + "'");
    }
    if (c.k_min < 0 || c.k_min > c.k_max || c.k_max > 12) {
        throw ConfigError("config: need 0 <= k_min <= k_max <= 12");
    }
    if (c.base_N < 1) throw ConfigError("config: base_N must be positive");
    if (!(c.coupling > 0.0)) throw ConfigError("config: coupling exponent must be positive");
    if (c.M < 2 || c.M > 20) throw ConfigError("config: M must lie in [2, 20]");
    if (!(c.x_max > 0.0) || !(c.horizon > 0.0)) throw ConfigError("config: x_max and T must be positive");
    if (!(c.rho > 0.0) || !(c.c0 > 0.0) || !(c.c0 / c.rho < c.rho)) {
        throw ConfigError("config: truncation needs rho > 0, c0 > 0 and c0/rho < rho");
    }
    if (c.y_max < 0.0) throw ConfigError("config: y_max must be positive or auto");
    if (!(c.window_lo < c.window_hi)) throw ConfigError("config: window_lo must be below window_hi");
    if (c.gap_window_hi != 0.0 && !(c.gap_window_lo < c.gap_window_hi)) {
        throw ConfigError("config: gap_window_lo must be below gap_window_hi");
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    return resolve_config(parse_key_values(in));
}

std::string ExperimentConfig::echo() const {
    std::map<std::string, std::string> kv{
        {"problem", problem_name(problem)},
        {"p", fmt(p)},
        {"r", fmt(r)},
        {"b", fmt(b)},
        {"sigma", fmt(sigma)},
        {"T", fmt(horizon)},
        {"x_max", fmt(x_max)},
        {"a_min", fmt(a_min)},
        {"a_max", fmt(a_max)},
        {"gamma_min", fmt(gamma_min)},
        {"gamma_max", fmt(gamma_max)},
        {"M", std::to_string(M)},
        {"k_min", std::to_string(k_min)},
        {"k_max", std::to_string(k_max)},
        {"base_N", std::to_string(base_N)},
        {"coupling", fmt(coupling)},
        {"rho", fmt(rho)},
        {"c0", fmt(c0)},
        {"y_max", y_max > 0.0 ? fmt(y_max) : "auto"},
        {"include_zero_dual_node", include_zero_dual_node ? "true" : "false"},
        {"window_lo", fmt(window_lo)},
        {"window_hi", fmt(window_hi)},
        {"gap_window_lo", fmt(gap_window_lo)},
        {"gap_window_hi", fmt(gap_window_hi > 0.0 ? gap_window_hi : x_max)},
        {"gap_time", gap_at_terminal ? "terminal" : "initial"},
        {"lipschitz_mode", lipschitz_mode ? "true" : "false"},
        {"bound_x", fmt(bound_x)},
        {"polar_x", fmt(polar_x)},
        {"polar_y", fmt(polar_y)},
        {"polar_a", fmt(polar_a)},
        {"polar_gamma", fmt(polar_gamma)},
        {"seed", std::to_string(seed)},
        {"mode", mode},
        {"timing", timing ? "true" : "false"},
    };
    if (problem == ProblemKind::cuoco_liu) {
        kv["R"] = fmt(R);
        kv["iota"] = fmt(iota);
        kv["lambda_plus"] = fmt(lambda_plus);
        kv["lambda_minus"] = fmt(lambda_minus);
    }
    std::string steps;
    for (int s : polar_steps) steps += (steps.empty() ? "" : ",") + std::to_string(s);
    kv["polar_steps"] = steps;

    std::string out;
    for (const auto& [key, value] : kv) {
        if (!out.empty()) out += ' ';
        out += key + '=' + value;
    }
    return out;
}

}  // namespace sldual
