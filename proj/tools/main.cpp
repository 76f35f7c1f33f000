// Command-line front end: problem ingestion, solver orchestration, JSON run
// reports on stdout, and trajectory export as delimiter-separated text.
//
// Exit codes: 0 success, 2 validation failure, 3 solver non-convergence or
// divergence, 4 parse error.

#include "cgcare/geometry.hpp"
#include "cgcare/lqcontrol.hpp"
#include "cgcare/problem_file.hpp"
#include "cgcare/riccati.hpp"
#include "report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace cgcare;
using cli::Json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitParse = 4;

struct Options {
    std::string input;
    std::optional<double> rank_tol;
    std::optional<double> ode_tol;
    std::optional<double> stat_tol;
    std::optional<double> res_tol;
    std::optional<double> t_max;
    std::optional<double> solution_tol;
    std::optional<double> sim_horizon;
    std::optional<double> horizon;
    int samples = 201;
    bool no_timestamp = false;
    bool echo_problem = false;
    bool infinite = false;
    std::string law = "infinite";
    std::string output;
};

struct Settings {
    RankTolerance rank;
    GrdeSettings grde;
    LimitSettings limit;
    SolveSettings solve;
    GridSpec grid;
};

double pick(const std::optional<double>& flag, const ProblemFileData& file,
            const char* name, double fallback) {
    if (flag) return *flag;
    const auto it = file.settings.find(name);
    return it != file.settings.end() ? it->second : fallback;
}

Settings make_settings(const Options& opt, const ProblemFileData& file) {
    Settings s;
    s.rank.relative = pick(opt.rank_tol, file, "rank_tol", RankTolerance{}.relative);
    s.grid.samples = opt.samples;

    s.grde.rank_tol = s.rank;
    const double grde_ode = pick(opt.ode_tol, file, "ode_tol", OdeSettings{}.rel_tol);
    s.grde.ode.rel_tol = grde_ode;
    s.grde.ode.abs_tol = grde_ode * 1e-2;

    s.limit.rank_tol = s.rank;
    const double limit_ode = pick(opt.ode_tol, file, "ode_tol", LimitSettings{}.ode.rel_tol);
    s.limit.ode.rel_tol = limit_ode;
    s.limit.ode.abs_tol = limit_ode * 1e-2;
    s.limit.stat_tol = pick(opt.stat_tol, file, "stat_tol", LimitSettings{}.stat_tol);
    s.limit.res_tol = pick(opt.res_tol, file, "res_tol", LimitSettings{}.res_tol);
    s.limit.t_max = pick(opt.t_max, file, "t_max", LimitSettings{}.t_max);
    s.limit.solution_tol =
        pick(opt.solution_tol, file, "solution_tol", LimitSettings{}.solution_tol);

    s.solve.grde = s.grde;
    s.solve.limit = s.limit;
    s.solve.grid = s.grid;
    s.solve.sim_horizon =
        pick(opt.sim_horizon, file, "sim_horizon", SolveSettings{}.sim_horizon);
    return s;
}

Json tolerances_json(const Settings& s) {
    return Json{{"rank_tol_relative", s.rank.relative},
                {"rank_tol_absolute", s.rank.absolute},
                {"ode_rel_tol", s.grde.ode.rel_tol},
                {"limit_ode_rel_tol", s.limit.ode.rel_tol},
                {"stat_tol", s.limit.stat_tol},
                {"res_tol", s.limit.res_tol},
                {"t_max", s.limit.t_max},
                {"solution_tol", s.limit.solution_tol},
                {"grid_samples", s.grid.samples}};
}

Json report_skeleton(const std::string& command, const std::string& input,
                     const Options& opt, const Settings& settings) {
    Json report{{"tool", "cgcare"}, {"command", command}, {"input", input}};
    if (!opt.no_timestamp) report["timestamp"] = cli::timestamp_now();
    report["tolerances"] = tolerances_json(settings);
    return report;
}

/// Validation plus the derived-data summary; returns false (exit 2) when the
/// standing assumption fails, in which case derived data is omitted.
bool fill_problem_sections(Json& report, const ProblemFileData& file,
                           const Settings& settings) {
    const ValidationReport validation = validate(file.problem, settings.rank);
    report["validation"] = cli::validation_json(validation);
    if (!validation.passed()) {
        report["status"] = "validation-failed";
        if (!validation.pi_psd) {
            std::cerr << "error: Pi not positive semidefinite (min eigenvalue "
                      << validation.pi_min_eigenvalue << ")\n";
        }
        if (!validation.kernel_inclusion_ok) {
            std::cerr << "error: ker R is not contained in ker S (defect "
                      << validation.kernel_inclusion_defect << ")\n";
        }
        return false;
    }
    const DerivedData derived = derive(file.problem, settings.rank);
    const Subspace reach = reachable_subspace(derived.F, derived.B2, settings.rank);
    report["derived"] = cli::derived_json(file.problem, derived, reach.dim());
    return true;
}

int cmd_validate(const Options& opt, const ProblemFileData& file, Json& report) {
    const Settings settings = make_settings(opt, file);
    report = report_skeleton("validate", opt.input, opt, settings);
    if (!fill_problem_sections(report, file, settings)) return kExitValidation;
    report["status"] = "ok";
    return kExitOk;
}

int cmd_solve_care(const Options& opt, const ProblemFileData& file, Json& report) {
    const Settings settings = make_settings(opt, file);
    report = report_skeleton("solve-care", opt.input, opt, settings);
    if (!fill_problem_sections(report, file, settings)) return kExitValidation;
    try {
        const LimitResult limit = care_limit_solution(file.problem, settings.limit);
        report["solver"] = cli::limit_json(limit);
        report["solver"]["candidate"] = cli::candidate_json(
            check_cgcare(file.problem, limit.Xbar, settings.limit.solution_tol,
                         settings.rank));
        report["geometry"] = cli::geometry_json(geometry_report(file.problem, settings.rank));
        if (!limit.converged) {
            report["status"] = "not-certified";
            std::cerr << "error: stationary flow failed certification\n";
            return kExitSolver;
        }
        report["status"] = "ok";
        return kExitOk;
    } catch (const NoConvergence& e) {
        report["solver"] = Json{{"status", "no-convergence"},
                                {"time", e.time},
                                {"residual_norm", e.residual_norm},
                                {"growth_rate", e.growth_rate},
                                {"growth_class", to_string(e.growth)}};
        report["status"] = "no-convergence";
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const IntegrationDiverged& e) {
        report["solver"] = Json{{"status", "diverged"},
                                {"time", e.time},
                                {"growth_rate", e.growth_rate},
                                {"growth_class", to_string(e.growth)}};
        report["status"] = "diverged";
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cmd_solve_lq(const Options& opt, const ProblemFileData& file, Json& report) {
    const Settings settings = make_settings(opt, file);
    report = report_skeleton("solve-lq", opt.input, opt, settings);
    if (!fill_problem_sections(report, file, settings)) return kExitValidation;

    if (!file.x0) {
        report["status"] = "validation-failed";
        std::cerr << "error: solve-lq requires an initial state (vector x0)\n";
        return kExitValidation;
    }
    try {
        LQSolution sol;
        Json lq;
        if (opt.infinite) {
            sol = solve_infinite(file.problem, *file.x0, settings.solve);
            lq["mode"] = "infinite";
            lq["gain"] = cli::matrix_json(sol.law.constant_gain);
        } else {
            const double T = opt.horizon ? *opt.horizon : file.horizon.value_or(0.0);
            if (T <= 0.0) {
                report["status"] = "validation-failed";
                std::cerr << "error: finite-horizon solve needs a positive horizon "
                             "(--horizon or scalar T in the file)\n";
                return kExitValidation;
            }
            const Matrix H = file.H.value_or(
                Matrix::Zero(file.problem.n(), file.problem.n()));
            sol = solve_finite({file.problem, H, T, *file.x0}, settings.solve);
            lq["mode"] = "finite";
            lq["horizon"] = T;
            lq["terminal_penalty_reduced"] = sol.terminal_penalty_reduced;
            lq["gain_stamps"] = sol.law.grid.size();
        }
        lq["optimal_value"] = sol.optimal_value;
        lq["value_matrix"] = cli::matrix_json(sol.value_matrix);
        const CostEstimate cost = evaluate_cost(sol.trajectory, file.problem);
        lq["simulated_cost"] = cost.value;
        lq["quadrature_error"] = cost.quadrature_error;
        report["lq"] = std::move(lq);
        report["status"] = "ok";
        return kExitOk;
    } catch (const NoConvergence& e) {
        report["status"] = "no-convergence";
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const IntegrationDiverged& e) {
        report["status"] = "diverged";
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cmd_geometry(const Options& opt, const ProblemFileData& file, Json& report) {
    const Settings settings = make_settings(opt, file);
    report = report_skeleton("geometry", opt.input, opt, settings);
    if (!fill_problem_sections(report, file, settings)) return kExitValidation;
    report["geometry"] = cli::geometry_json(geometry_report(file.problem, settings.rank));
    report["status"] = "ok";
    return kExitOk;
}

int cmd_simulate(const Options& opt, const ProblemFileData& file) {
    const Settings settings = make_settings(opt, file);
    const ValidationReport validation = validate(file.problem, settings.rank);
    if (!validation.passed()) {
        std::cerr << "error: problem fails validation\n";
        return kExitValidation;
    }
    if (!file.x0) {
        std::cerr << "error: simulate requires an initial state (vector x0)\n";
        return kExitValidation;
    }
    try {
        LQSolution sol;
        if (opt.law == "finite") {
            const double T = opt.horizon ? *opt.horizon : file.horizon.value_or(0.0);
            if (T <= 0.0) {
                std::cerr << "error: finite law needs a positive horizon\n";
                return kExitValidation;
            }
            const Matrix H = file.H.value_or(
                Matrix::Zero(file.problem.n(), file.problem.n()));
            sol = solve_finite({file.problem, H, T, *file.x0}, settings.solve);
        } else {
            sol = solve_infinite(file.problem, *file.x0, settings.solve);
        }
        if (opt.output.empty()) {
            cli::write_trajectory_csv(std::cout, sol.trajectory);
        } else {
            std::ofstream out(opt.output);
            if (!out) {
                std::cerr << "error: cannot open output file '" << opt.output << "'\n";
                return kExitParse;
            }
            cli::write_trajectory_csv(out, sol.trajectory);
        }
        return kExitOk;
    } catch (const NoConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const IntegrationDiverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

std::vector<std::string> batch_inputs(const std::string& path) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".lqp") {
            files.push_back(entry.path().string());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

/// Runs a report-producing command on one file or on every problem file in
/// a directory, printing one JSON document either way.
template <class Handler>
int run_reporting(Options opt, Handler&& handler) {
    const bool is_dir = std::filesystem::is_directory(opt.input);
    std::vector<std::string> inputs =
        is_dir ? batch_inputs(opt.input) : std::vector<std::string>{opt.input};
    if (is_dir && inputs.empty()) {
        std::cerr << "error: no .lqp files in '" << opt.input << "'\n";
        return kExitParse;
    }

    Json batch = Json::array();
    int exit_code = kExitOk;
    for (const std::string& input : inputs) {
        Json report;
        int code;
        try {
            const ProblemFileData file = load_problem_file(input);
            Options local = opt;
            local.input = input;
            code = handler(local, file, report);
        } catch (const ParseError& e) {
            std::cerr << "error: " << e.what() << "\n";
            report = Json{{"tool", "cgcare"}, {"input", input}, {"status", "parse-error"},
                          {"message", e.what()}};
            code = kExitParse;
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            report = Json{{"tool", "cgcare"}, {"input", input}, {"status", "error"},
                          {"message", e.what()}};
            code = kExitValidation;
        }
        report["exit_code"] = code;
        exit_code = std::max(exit_code, code);
        batch.push_back(std::move(report));
    }
    std::cout << (is_dir ? batch.dump(2) : batch.front().dump(2)) << "\n";
    return exit_code;
}

void add_common_options(CLI::App* cmd, Options& opt, bool wants_input = true) {
    if (wants_input) {
        cmd->add_option("file", opt.input, "problem file (.lqp), or a directory for batch runs")
            ->required();
    }
    cmd->add_option("--rank-tol", opt.rank_tol,
                    "relative singular-value cutoff for rank decisions (default 1e-10)");
    cmd->add_option("--ode-tol", opt.ode_tol,
                    "relative local error of the adaptive integrator (default 1e-10; the "
                    "limit solver defaults to 1e-11)");
    cmd->add_option("--stat-tol", opt.stat_tol,
                    "stationarity threshold on the flow derivative, scaled by 1 + |X| "
                    "(default 1e-9)");
    cmd->add_option("--res-tol", opt.res_tol,
                    "absolute residual threshold for limit detection (default 1e-8)");
    cmd->add_option("--t-max", opt.t_max,
                    "time budget for the forward limit flow (default 200)");
    cmd->add_option("--solution-tol", opt.solution_tol,
                    "certification tolerance for limit solutions (default 1e-7)");
    cmd->add_option("--samples", opt.samples,
                    "output stamps per trajectory or flow (default 201)");
    cmd->add_flag("--no-timestamp", opt.no_timestamp,
                  "omit the timestamp so reports are byte-reproducible");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cgcare: linear-quadratic optimal control with a possibly singular input "
        "weight, via the constrained generalised Riccati equation"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "check the standing assumptions of a problem file");
    add_common_options(validate_cmd, opt);
    validate_cmd->add_flag("--echo-problem", opt.echo_problem,
                           "print the canonical problem-file serialization and exit");

    CLI::App* care_cmd = app.add_subcommand(
        "solve-care", "minimal PSD solution of the constrained Riccati equation");
    add_common_options(care_cmd, opt);

    CLI::App* lq_cmd =
        app.add_subcommand("solve-lq", "finite- or infinite-horizon optimal control");
    add_common_options(lq_cmd, opt);
    CLI::Option* horizon_opt = lq_cmd->add_option(
        "--horizon", opt.horizon, "finite horizon length (overrides scalar T)");
    lq_cmd->add_flag("--infinite", opt.infinite, "solve the infinite-horizon problem")
        ->excludes(horizon_opt);
    lq_cmd->add_option("--sim-horizon", opt.sim_horizon,
                       "simulation span for the infinite-horizon law (default 20)");

    CLI::App* geo_cmd =
        app.add_subcommand("geometry", "output-nulling and input-containing subspace report");
    add_common_options(geo_cmd, opt);

    CLI::App* sim_cmd =
        app.add_subcommand("simulate", "closed-loop simulation and trajectory export");
    add_common_options(sim_cmd, opt);
    sim_cmd->add_option("--law", opt.law, "feedback law to simulate: infinite | finite")
        ->check(CLI::IsMember({"infinite", "finite"}));
    sim_cmd->add_option("--horizon", opt.horizon, "horizon for the finite law");
    sim_cmd->add_option("--sim-horizon", opt.sim_horizon,
                        "simulation span for the infinite-horizon law (default 20)");
    sim_cmd->add_option("--output", opt.output,
                        "write the trajectory to this file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    if (validate_cmd->parsed()) {
        if (opt.echo_problem) {
            try {
                std::cout << write_problem_file(load_problem_file(opt.input));
                return kExitOk;
            } catch (const ParseError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitParse;
            }
        }
        return run_reporting(opt, cmd_validate);
    }
    if (care_cmd->parsed()) return run_reporting(opt, cmd_solve_care);
    if (lq_cmd->parsed()) return run_reporting(opt, cmd_solve_lq);
    if (geo_cmd->parsed()) return run_reporting(opt, cmd_geometry);
    if (sim_cmd->parsed()) {
        try {
            const ProblemFileData file = load_problem_file(opt.input);
            return cmd_simulate(opt, file);
        } catch (const ParseError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitParse;
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitValidation;
        }
    }
    return kExitOk;
}
