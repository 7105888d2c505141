// qvibench: benchmark harness for the QVI solver library.
//
// Subcommands:
//   run      execute (problem x start x solver) cells, write CSV/JSON results
//   profile  performance profiles from a results CSV
//   rate     verify the linear-rate guarantee on one problem
//   list     catalog of the builtin problems
//
// Exit codes: 0 success, 2 usage/configuration error, 3 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <qvi/qvi.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// One benchmark request: what to run, how, and where the rows go.
struct RunManifest {
    std::vector<std::string> problems;  // file paths, or the single word "builtin"
    std::vector<std::string> solvers;   // algorithm tags, or the single word "all"
    std::optional<double> gamma;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<double> theta;   // constant schedule override
    std::optional<double> alpha;   // constant schedule override
    std::optional<double> beta;    // constant schedule override
    std::string output;
    std::string format = "csv";
    int jobs = 1;
};

int jobs_from_env() {
    const char* env = std::getenv("QVIBENCH_JOBS");
    if (env == nullptr || *env == '\0') return 1;
    try {
        const int j = std::stoi(env);
        if (j < 1 || j > qvi::kMaxJobs)
            throw std::invalid_argument("out of range");
        return j;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("QVIBENCH_JOBS must be an integer in [1, ") +
                                    std::to_string(qvi::kMaxJobs) + "], got '" + env + "'");
    }
}

// Each entry is the keyword "builtin" (the whole catalog), a problem file
// path, or the name of a single builtin problem.
std::vector<qvi::QviProblem> resolve_problems(const std::vector<std::string>& specs) {
    std::vector<qvi::QviProblem> problems;
    for (const auto& s : specs) {
        if (s == "builtin") {
            for (const auto& p : qvi::builtin_suite()) problems.push_back(p);
        } else if (s.find('/') != std::string::npos || s.find(".json") != std::string::npos) {
            problems.push_back(qvi::load_problem(s));
        } else {
            problems.push_back(qvi::suite_problem(s));
        }
    }
    return problems;
}

std::vector<qvi::Algorithm> resolve_solvers(const std::vector<std::string>& tags) {
    std::vector<qvi::Algorithm> algos;
    for (const auto& t : tags) {
        if (t == "all") {
            for (qvi::Algorithm a : qvi::all_algorithms()) algos.push_back(a);
        } else {
            algos.push_back(qvi::parse_algorithm(t));  // throws naming the tag
        }
    }
    return algos;
}

int cmd_run(const RunManifest& m) {
    // Any problem-load failure (unreadable or malformed) is a configuration
    // error and aborts before anything runs.
    std::vector<qvi::QviProblem> problems;
    try {
        problems = resolve_problems(m.problems);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const auto algos = resolve_solvers(m.solvers);

    qvi::SolverConfig base;  // defaults mirror the reference experimental setup
    if (m.tol) base.tol = *m.tol;
    if (m.max_iter) base.max_iter = *m.max_iter;
    if (m.theta) base.theta = qvi::Schedule::constant(*m.theta);
    if (m.alpha) base.alpha = qvi::Schedule::constant(*m.alpha);
    if (m.beta) base.beta_sched = qvi::Schedule::constant(*m.beta);

    // Step-size priority: explicit flag, then the problem's certified gamma,
    // then the library default.
    auto config_for = [&](const qvi::QviProblem& p) {
        qvi::SolverConfig cfg = base;
        if (m.gamma) cfg.gamma = *m.gamma;
        else if (p.certified) cfg.gamma = p.certified->gamma;
        return cfg;
    };

    const auto records = qvi::run_cells_with(problems, algos, config_for, m.jobs);

    std::ofstream out(m.output);
    if (!out) {
        std::cerr << "error: cannot open '" << m.output << "' for writing\n";
        return kExitIo;
    }
    if (m.format == "csv") {
        qvi::write_csv(records, out);
    } else {
        out << qvi::records_to_json(records).dump(2) << "\n";
    }
    if (!out) {
        std::cerr << "error: write to '" << m.output << "' failed\n";
        return kExitIo;
    }
    return kExitOk;
}

std::vector<double> log_grid(double top, int points) {
    // Log-spaced T in [1, top]; a degenerate top (all ratios 1) still yields a
    // short flat curve so downstream plots have a line to draw.
    if (!(top > 1.0)) top = 2.0;
    if (points < 2) points = 2;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points));
    const double log_top = std::log(top);
    for (int i = 0; i < points; ++i)
        grid.push_back(std::exp(log_top * static_cast<double>(i) / static_cast<double>(points - 1)));
    grid.back() = top;  // kill rounding on the endpoint
    return grid;
}

int cmd_profile(const std::string& results_path, const std::string& metric_name,
                const std::string& out_path, const std::string& gnuplot_path, int points) {
    std::ifstream in(results_path);
    if (!in) {
        std::cerr << "error: cannot open '" << results_path << "'\n";
        return kExitIo;
    }
    const auto records = qvi::parse_csv(in);  // throws invalid_argument on malformed rows

    const qvi::PerfMetric metric =
        metric_name == "iters" ? qvi::PerfMetric::Iters : qvi::PerfMetric::Time;
    const auto table = qvi::performance_ratios(records, metric);
    for (const auto& inst : table.excluded)
        std::cerr << "warning: instance '" << inst << "' excluded (no solver succeeded)\n";
    if (table.instances.empty())
        throw std::invalid_argument("profile: every instance failed; nothing to profile");

    double top = 1.0;
    for (const auto& row : table.ratios)
        for (const double r : row)
            if (std::isfinite(r)) top = std::max(top, r);
    const auto grid = log_grid(top, points);

    std::vector<qvi::ProfileCurve> curves;
    for (const auto& s : table.solvers) curves.push_back(qvi::profile_curve(table, s, grid));

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "error: cannot open '" << out_path << "' for writing\n";
            return kExitIo;
        }
        os = &file;
    }
    *os << "solver,T,rho\n";
    for (const auto& c : curves)
        for (const auto& [T, rho] : c.points)
            *os << c.solver << ',' << qvi::format_double(T) << ',' << qvi::format_double(rho)
                << '\n';
    if (!*os) {
        std::cerr << "error: writing profile data failed\n";
        return kExitIo;
    }

    if (!gnuplot_path.empty()) {
        // One block per solver, separated by two blank lines, so gnuplot can
        // address them with `index N` and `plot ... with steps`.
        std::ofstream gp(gnuplot_path);
        if (!gp) {
            std::cerr << "error: cannot open '" << gnuplot_path << "' for writing\n";
            return kExitIo;
        }
        gp << "# performance profile (" << metric_name << ")\n";
        gp << "# plot: plot for [i=0:" << curves.size() - 1 << "] 'file' index i"
           << " using 1:2 with steps title columnheader(1)\n";
        for (std::size_t i = 0; i < curves.size(); ++i) {
            gp << "\"" << curves[i].solver << "\"\n";
            for (const auto& [T, rho] : curves[i].points)
                gp << qvi::format_double(T) << ' ' << qvi::format_double(rho) << '\n';
            if (i + 1 < curves.size()) gp << "\n\n";
        }
        if (!gp) {
            std::cerr << "error: write to '" << gnuplot_path << "' failed\n";
            return kExitIo;
        }
    }
    return kExitOk;
}

qvi::QviProblem resolve_one_problem(const std::string& spec) {
    if (spec.find('/') != std::string::npos || spec.find(".json") != std::string::npos)
        return qvi::load_problem(spec);
    return qvi::suite_problem(spec);  // throws "unknown builtin problem" otherwise
}

int cmd_rate(const std::string& problem_spec, const std::string& solver,
             std::optional<double> gamma, std::optional<double> theta, int iters, int start_id,
             bool dump_eoc) {
    if (solver != "proposed") {
        std::cerr << "error: rate verification tracks the averaged companion sequence, which only "
                     "the 'proposed' solver produces; got '" << solver << "'\n";
        return kExitConfig;
    }
    std::optional<qvi::QviProblem> loaded;
    try {
        loaded = resolve_one_problem(problem_spec);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const qvi::QviProblem& problem = *loaded;
    if (!problem.certified) {
        std::cerr << "error: problem '" << problem.name << "' carries no certified parameters; "
                     "declare \"gamma\" (and optionally \"theta_bounds\": [a, b]) in the problem "
                     "file so the rate constant is defined\n";
        return kExitConfig;
    }
    const auto& cert = *problem.certified;
    if (start_id < 0 || start_id >= static_cast<int>(problem.starts.size())) {
        std::cerr << "error: start index " << start_id << " out of range (problem has "
                  << problem.starts.size() << " starts)\n";
        return kExitConfig;
    }

    const double run_gamma = gamma.value_or(cert.gamma);
    const double run_theta = theta.value_or(cert.a == cert.b ? cert.a : 0.5 * (cert.a + cert.b));
    const double a_eff = theta ? *theta : cert.a;
    const double b_eff = theta ? *theta : cert.b;

    // Re-certify at the requested step size; the constructor quotes the
    // admissible interval when gamma falls outside it.
    std::optional<qvi::ContractionParams> params;
    try {
        params.emplace(cert.mu, cert.lip, cert.lambda, run_gamma, a_eff, b_eff);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    const qvi::Vec x_star = problem.reference ? *problem.reference
                                              : qvi::reference_solution(problem);
    const auto probe = qvi::check_termination(problem, x_star, 1e-8);
    if (!probe.done) {
        std::cerr << "error: solution estimate fails validation at 1e-8 (opt = " << probe.opt
                  << ", feas = " << probe.feas << ")\n";
        return kExitConfig;
    }

    qvi::SolverConfig cfg;
    cfg.algorithm = qvi::Algorithm::Proposed;
    cfg.gamma = run_gamma;
    cfg.theta = qvi::Schedule::constant(run_theta);
    cfg.tol = -1.0;  // fixed horizon: keep the Lyapunov sequence long enough to fit
    cfg.max_iter = iters;
    const auto trace = qvi::solve(problem, cfg, problem.starts[static_cast<std::size_t>(start_id)]);
    const auto report = qvi::rate_report(trace, x_star, *params);

    const auto iv = qvi::gamma_interval(cert.mu, cert.lip, cert.lambda);
    nlohmann::json j;
    j["problem"] = problem.name;
    j["solver"] = solver;
    j["gamma"] = run_gamma;
    j["theta"] = run_theta;
    j["iters"] = trace.iters();
    j["beta"] = params->beta;
    j["gamma_interval"] = {iv.first, iv.second};
    j["rho_theoretical"] = report.rho_theoretical;
    j["rho_empirical"] = report.rho_empirical;
    j["bound_violations"] = report.bound_violations;
    if (report.rho_empirical == 0.0)
        j["note"] = "iterates decayed to the floating-point floor too fast to fit a rate";
    if (dump_eoc) {
        nlohmann::json w = nlohmann::json::array();
        for (const auto& win : qvi::eoc_all(trace)) w.push_back({win.k, win.value});
        j["eoc_windows"] = std::move(w);
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_list() {
    std::printf("%-11s %4s %7s %7s %7s %9s %9s %7s\n", "name", "n", "lambda", "mu", "lip",
                "gamma_lo", "gamma_hi", "starts");
    for (const auto& p : qvi::builtin_suite()) {
        const double mu = p.op.mu;
        const double lip = p.op.lip;
        const double lambda = qvi::lambda_certificate(p.feasible);
        const auto iv = qvi::gamma_interval(mu, lip, lambda);
        std::printf("%-11s %4zu %7.4g %7.4g %7.4g %9.4g %9.4g %7zu\n", p.name.c_str(), p.dim(),
                    lambda, mu, lip, iv.first, iv.second, p.starts.size());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qvibench: projection-based QVI solver benchmarks"};
    app.require_subcommand(1);

    RunManifest manifest;
    try {
        manifest.jobs = jobs_from_env();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    auto* run = app.add_subcommand("run", "Run solvers over problems, write results");
    run->add_option("--problems", manifest.problems,
                    "Problem files, builtin problem names, or the word 'builtin' for the whole suite")
        ->required()
        ->expected(-1);
    run->add_option("--solvers", manifest.solvers,
                    "Solver tags (proposed gradproj extragrad relaxed1 relaxed2 inertial), or 'all'")
        ->required()
        ->expected(-1);
    double g = 0, t = 0, th = 0, al = 0, be = 0;
    int mi = 0;
    auto* g_opt = run->add_option("--gamma", g, "Step size override (default: certified, else 0.5)");
    auto* t_opt = run->add_option("--tol", t, "Termination tolerance (default 1e-4; negative disables)");
    auto* mi_opt = run->add_option("--max-iter", mi, "Iteration cap (default 1000)");
    auto* th_opt = run->add_option("--theta", th, "Constant averaging weight override");
    auto* al_opt = run->add_option("--alpha", al, "Constant relaxation weight override");
    auto* be_opt = run->add_option("--beta", be, "Constant inertial weight override (relaxed2)");
    run->add_option("--jobs", manifest.jobs, "Parallel workers (default $QVIBENCH_JOBS or 1)")
        ->check(CLI::Range(1, qvi::kMaxJobs));
    run->add_option("--out", manifest.output, "Output file")->required();
    run->add_option("--format", manifest.format, "Output format")
        ->required()
        ->check(CLI::IsMember({"csv", "json"}));

    std::string results_path, metric = "iters", prof_out, gnuplot_out;
    int prof_points = 50;
    auto* profile = app.add_subcommand("profile", "Performance profiles from a results CSV");
    profile->add_option("results", results_path, "Results CSV from 'run'")->required();
    profile->add_option("--metric", metric, "Cost measure")
        ->required()
        ->check(CLI::IsMember({"iters", "time"}));
    profile->add_option("--out", prof_out, "Write profile CSV here instead of stdout");
    profile->add_option("--gnuplot", gnuplot_out, "Also write a gnuplot-ready block layout");
    profile->add_option("--points", prof_points, "Grid size (default 50)")->check(CLI::Range(2, 100000));

    std::string rate_problem, rate_solver = "proposed";
    double rate_gamma = 0, rate_theta = 0;
    int rate_iters = 40, rate_start = 0;
    bool rate_dump_eoc = false;
    auto* rate = app.add_subcommand("rate", "Verify the linear-rate guarantee on one problem");
    rate->add_option("--problem", rate_problem, "Builtin problem name or problem file")->required();
    rate->add_option("--solver", rate_solver, "Solver tag (must be 'proposed')")->required();
    auto* rg_opt = rate->add_option("--gamma", rate_gamma, "Step size (default: certified)");
    auto* rt_opt = rate->add_option("--theta", rate_theta,
                                    "Constant averaging weight (default: certified bounds)");
    rate->add_option("--iters", rate_iters, "Fixed iteration horizon (default 40)")
        ->check(CLI::Range(5, 1000000));
    rate->add_option("--start", rate_start, "Start index (default 0)");
    rate->add_flag("--dump-eoc", rate_dump_eoc, "Include every EOC window in the report");

    auto* list = app.add_subcommand("list", "Catalog of builtin problems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            if (g_opt->count()) manifest.gamma = g;
            if (t_opt->count()) manifest.tol = t;
            if (mi_opt->count()) manifest.max_iter = mi;
            if (th_opt->count()) manifest.theta = th;
            if (al_opt->count()) manifest.alpha = al;
            if (be_opt->count()) manifest.beta = be;
            return cmd_run(manifest);
        }
        if (profile->parsed())
            return cmd_profile(results_path, metric, prof_out, gnuplot_out, prof_points);
        if (rate->parsed())
            return cmd_rate(rate_problem, rate_solver,
                            rg_opt->count() ? std::optional<double>(rate_gamma) : std::nullopt,
                            rt_opt->count() ? std::optional<double>(rate_theta) : std::nullopt,
                            rate_iters, rate_start, rate_dump_eoc);
        if (list->parsed()) return cmd_list();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitConfig;
}
