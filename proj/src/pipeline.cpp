#include "sldual/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "sldual/analytics.hpp"
#include "sldual/apriori.hpp"
#include "sldual/csv.hpp"
#include "sldual/duality.hpp"
#include "sldual/error.hpp"
#include "sldual/solver.hpp"

namespace sldual {

namespace {

DiscretizationConfig level_config(const ExperimentConfig& c, int k) {
    DiscretizationConfig d = ladder_level(k, c.x_max, c.M, c.base_N, c.coupling);
    if (c.y_max > 0.0) {
        d.y_max = c.y_max;
        d.dual_intervals =
            std::max(1, static_cast<int>(std::lround(d.space_intervals * c.y_max / c.x_max)));
    }
    return d;
}

RefinementLadder ladder_of(const ExperimentConfig& c) {
    RefinementLadder l;
    l.k_min = c.k_min;
    l.k_max = c.k_max;
    l.x_max = c.x_max;
    l.quadrature_order = c.M;
    l.base_steps = c.base_N;
    l.exponent = c.coupling;
    return l;
}

Window gap_window(const ExperimentConfig& c) {
    return {c.gap_window_lo, c.gap_window_hi > 0.0 ? c.gap_window_hi : c.x_max};
}

std::ofstream open_csv(const std::string& path, const ExperimentConfig& c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    csv::comment(out, c.echo());
    return out;
}

std::string output_path(const RunRequest& req, const ExperimentConfig& c, const std::string& stem) {
    std::filesystem::create_directories(req.out_dir);
    return (std::filesystem::path(req.out_dir) / (std::string(problem_name(c.problem)) + "_" + stem +
                                                  ".csv"))
        .string();
}

GapOptions gap_options(const ExperimentConfig& c) {
    GapOptions o;
    o.include_zero_dual_node = c.include_zero_dual_node;
    return o;
}

struct LevelSolution {
    ValueSurface primal;
    ValueSurface dual;
    GapReport gap;
};

LevelSolution solve_level(const ExperimentConfig& c, const Problem& problem,
                          const DiscretizationConfig& d) {
    ValueSurface primal = solve_primal(problem.model, problem.utility, d);
    ValueSurface dual = solve_dual(problem.model, conjugate_spec(problem.utility), d);
    const int n = c.gap_at_terminal ? d.steps : 0;
    GapReport gap = duality_gap(primal, dual, n, gap_options(c));
    return {std::move(primal), std::move(dual), std::move(gap)};
}

BoundReport bounds_for(const ExperimentConfig& c, const Problem& problem, const LevelSolution& s) {
    const QuadratureRule rule = gauss_hermite_rule(c.M);
    const BoundConstants k =
        default_bound_constants(problem.model, problem.utility, rule, s.primal.times.h(),
                                s.primal.grid.dx());
    std::function<double(double)> delta;
    if (!c.lipschitz_mode) {
        const CoefficientBounds cb = coefficient_bounds(problem.model);
        delta = [&c, cb, &problem](double x) {
            return delta_allowance(x, c.rho, c.c0, cb, problem.model.horizon, problem.utility);
        };
    }
    return aposteriori_bounds(s.gap, k, delta);
}

std::string run_solve(const ExperimentConfig& c, const RunRequest& req, const Problem& problem,
                      bool dual, std::ostream& log) {
    const int k = req.level.value_or(c.k_max);
    const DiscretizationConfig d = level_config(c, k);
    const auto start = std::chrono::steady_clock::now();
    const ValueSurface s = dual ? solve_dual(problem.model, conjugate_spec(problem.utility), d)
                                : solve_primal(problem.model, problem.utility, d);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string path =
        output_path(req, c, std::string(dual ? "dual" : "primal") + "_k" + std::to_string(k));
    auto out = open_csv(path, c);
    write_surface_csv(out, s);
    log << (dual ? "solve-dual" : "solve-primal") << " k=" << k << " N=" << d.steps
        << " J=" << s.grid.intervals() << " value(0,x_max)=" << csv::number(s.row(0).back())
        << " (" << secs << " s)\n";
    return path;
}

std::string run_gap(const ExperimentConfig& c, const RunRequest& req, const Problem& problem,
                    std::ostream& log) {
    const int k = req.level.value_or(c.k_max);
    const DiscretizationConfig d = level_config(c, k);
    const LevelSolution s = solve_level(c, problem, d);
    const BoundReport full = bounds_for(c, problem, s);
    const Window w = gap_window(c);
    BoundReport shown = full;
    shown.x.clear();
    shown.gap.clear();
    shown.argmin_y.clear();
    shown.delta.clear();
    shown.lower.clear();
    shown.upper.clear();
    for (std::size_t i = 0; i < full.x.size(); ++i) {
        if (full.x[i] < w.lo - 1e-12 || full.x[i] > w.hi + 1e-12) continue;
        shown.x.push_back(full.x[i]);
        shown.gap.push_back(full.gap[i]);
        shown.argmin_y.push_back(full.argmin_y[i]);
        shown.delta.push_back(full.delta[i]);
        shown.lower.push_back(full.lower[i]);
        shown.upper.push_back(full.upper[i]);
    }
    const Norms norms = window_norms(s.gap.x, s.gap.gap, w, s.primal.grid.dx());
    const std::string path = output_path(req, c, "gap_k" + std::to_string(k));
    auto out = open_csv(path, c);
    write_bound_csv(out, shown);
    log << "gap k=" << k << " N=" << d.steps << " J=" << d.space_intervals
        << " l1=" << csv::number(norms.l1) << " l2=" << csv::number(norms.l2)
        << " linf=" << csv::number(norms.linf) << '\n';
    return path;
}

std::string run_convergence(const ExperimentConfig& c, const RunRequest& req, const Problem& problem,
                            std::ostream& log) {
    const std::string mode = req.mode.value_or(c.mode);
    LadderProblem lp{problem.model, problem.utility, {}, problem.reference, gap_options(c)};
    LadderMode m = LadderMode::error;
    if (mode == "error") {
        if (!problem.reference) {
            throw ConfigError(std::string("error mode needs a closed-form reference; '") +
                              problem_name(c.problem) + "' has none, use --mode gap");
        }
        lp.window = {c.window_lo, c.window_hi};
    } else if (mode == "gap") {
        m = LadderMode::gap;
        lp.window = gap_window(c);
    } else {
        throw ConfigError("mode must be error or gap, got '" + mode + "'");
    }
    const ConvergenceTable table = run_ladder(lp, ladder_of(c), m);
    for (const ConvergenceRow& r : table.rows) {
        log << "convergence[" << mode << "] k=" << r.k << " N=" << r.steps
            << " J=" << r.space_intervals << " l1=" << csv::number(r.norms.l1)
            << " l2=" << csv::number(r.norms.l2) << " linf=" << csv::number(r.norms.linf);
        if (r.order_linf) log << " order_linf=" << *r.order_linf;
        log << " (" << r.seconds << " s)\n";
    }
    const std::string path = output_path(req, c, "convergence_" + mode);
    auto out = open_csv(path, c);
    write_convergence_csv(out, table, c.timing);
    return path;
}

std::string run_bounds(const ExperimentConfig& c, const RunRequest& req, const Problem& problem,
                       std::ostream& log) {
    const QuadratureRule rule = gauss_hermite_rule(c.M);
    const CoefficientBounds cb = coefficient_bounds(problem.model);
    const double lip = problem.utility.lipschitz();
    const std::string path = output_path(req, c, "bounds");
    auto out = open_csv(path, c);
    out << "h,em_bound,gh_bound,empirical_error,duality_gap\n";
    for (const DiscretizationConfig& d : ladder_of(c).levels()) {
        const LevelSolution s = solve_level(c, problem, d);
        const double h = s.primal.times.h();
        const double em = em_bound(h, c.bound_x, lip, cb, problem.model.horizon);
        const double gh = gh_bound(h, c.bound_x, c.M, lip, cb, problem.model.horizon, rule);
        const double err =
            problem.reference
                ? window_norms(s.primal.row(0), s.primal.grid, problem.reference,
                               {c.window_lo, c.window_hi})
                      .linf
                : std::numeric_limits<double>::quiet_NaN();
        const double gap = window_norms(s.gap.x, s.gap.gap, gap_window(c), s.primal.grid.dx()).linf;
        out << csv::number(h) << ',' << csv::number(em) << ',' << csv::number(gh) << ','
            << csv::number(err) << ',' << csv::number(gap) << '\n';
        log << "bounds N=" << d.steps << " h=" << csv::number(h) << " em=" << csv::number(em)
            << " gh=" << csv::number(gh) << " error=" << csv::number(err)
            << " gap=" << csv::number(gap) << '\n';
    }
    return path;
}

std::string run_polar(const ExperimentConfig& c, const RunRequest& req, const Problem& problem,
                      std::ostream& log) {
    const QuadratureRule rule = gauss_hermite_rule(c.M);
    const std::string path = output_path(req, c, "polar");
    auto out = open_csv(path, c);
    out << "N,h,product_expectation,defect,defect_ratio\n";
    for (int steps : c.polar_steps) {
        const std::vector<double> a(steps, c.polar_a);
        const std::vector<double> g(steps, c.polar_gamma);
        const PolarCheck pc = polar_property_check(problem.model, rule, steps, c.polar_x, c.polar_y, a, g);
        const double h = problem.model.horizon / steps;
        const double ratio = pc.defect / (c.polar_x * c.polar_y * h);
        out << steps << ',' << csv::number(h) << ',' << csv::number(pc.product_expectation) << ','
            << csv::number(pc.defect) << ',' << csv::number(ratio) << '\n';
        log << "polar-check N=" << steps << " E[XY]=" << csv::number(pc.product_expectation)
            << " defect/(xyh)=" << csv::number(ratio) << '\n';
    }
    return path;
}

}  // namespace

Problem build_problem(const ExperimentConfig& c) {
    try {
        Utility u = lipschitz_truncate(power_utility(c.p), c.rho, c.c0);
        switch (c.problem) {
            case ProblemKind::merton: {
                MertonParams mp;
                mp.p = c.p;
                mp.r = c.r;
                mp.b = c.b;
                mp.sigma = c.sigma;
                mp.horizon = c.horizon;
                mp.controls = {c.a_min, c.a_max};
                const double horizon = c.horizon;
                MarketModel m = merton_model(mp);
                m.dual_controls = {c.gamma_min, c.gamma_max};
                return {m, u,
                        [mp, horizon](double x) { return merton_closed_form(mp, horizon, x); }};
            }
            case ProblemKind::cuoco_liu: {
                CuocoLiuParams cp;
                cp.r = c.r;
                cp.R = c.R;
                cp.b = c.b;
                cp.sigma = c.sigma;
                cp.horizon = c.horizon;
                cp.iota = c.iota;
                cp.lambda_plus = c.lambda_plus;
                cp.lambda_minus = c.lambda_minus;
                cp.dual_controls = {c.gamma_min, c.gamma_max};
                return {cuoco_liu_model(cp), u, {}};
            }
            case ProblemKind::custom: {
                MarketModel m;
                m.name = "custom";
                m.r = [r = c.r](double) { return r; };
                m.b = [b = c.b](double) { return b; };
                m.sigma = [s = c.sigma](double) { return s; };
                m.g = [](double, double) { return 0.0; };
                m.controls = {c.a_min, c.a_max};
                m.dual_controls = {c.gamma_min, c.gamma_max};
                m.horizon = c.horizon;
                validate(m);
                return {m, u, {}};
            }
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid model parameters: ") + e.what());
    } catch (const Unsupported& e) {
        throw ConfigError(std::string("unsupported utility: ") + e.what());
    }
    throw ConfigError("unknown problem");
}

std::string run_pipeline(const ExperimentConfig& config, const RunRequest& request, std::ostream& log) {
    const Problem problem = build_problem(config);
    if (request.level && (*request.level < 0 || *request.level > 12)) {
        throw ConfigError("--level must lie in [0, 12]");
    }
    if (request.mode && *request.mode != "error" && *request.mode != "gap") {
        throw ConfigError("--mode must be error or gap");
    }
    const std::string& cmd = request.command;
    if (cmd == "solve-primal") return run_solve(config, request, problem, false, log);
    if (cmd == "solve-dual") return run_solve(config, request, problem, true, log);
    if (cmd == "gap") return run_gap(config, request, problem, log);
    if (cmd == "convergence") return run_convergence(config, request, problem, log);
    if (cmd == "bounds") return run_bounds(config, request, problem, log);
    if (cmd == "polar-check") return run_polar(config, request, problem, log);
    throw ConfigError("unknown command '" + cmd + "'");
}

int run_from_file(const std::string& config_path, const RunRequest& request, std::ostream& log,
                  std::ostream& err) {
    try {
        const ExperimentConfig config = load_config(config_path);
        const std::string path = run_pipeline(config, request, log);
        log << "wrote " << path << '\n';
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const ResourceLimit& e) {
        err << "resource limit: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sldual
