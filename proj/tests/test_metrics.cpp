// Evaluation machinery: optimality/feasibility measures, the experimental
// order of convergence, performance-ratio tables and profile curves, the
// executable linear-rate report, and the results-file round trip.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include <qvi/qvi.hpp>

namespace {

// Constant-map problem helper: K(x) = base for all x.
qvi::QviProblem fixed_set_problem(const char* name, qvi::Vec q, qvi::ConvexSet base,
                                  qvi::Vec start) {
    const std::size_t n = q.size();
    return qvi::QviProblem(name, qvi::AffineOperator(qvi::DenseMatrix::identity(n), std::move(q),
                                                     1.0, 1.0),
                           qvi::FeasibleMap(qvi::DenseMatrix(n, n), qvi::Vec(n, 0.0),
                                            std::move(base)),
                           {std::move(start)});
}

qvi::IterationTrace trace_with_steps(const std::vector<double>& steps) {
    qvi::IterationTrace t;
    t.problem = "synthetic";
    t.solver = "gradproj";
    for (std::size_t k = 0; k < steps.size(); ++k) {
        qvi::IterationRecord r;
        r.k = static_cast<int>(k);
        r.x = {0.0};
        r.step_norm = steps[k];
        t.records.push_back(std::move(r));
    }
    return t;
}

qvi::RunRecord row(const char* problem, int start, const char* solver, int iters, double ms,
                   qvi::Status status) {
    qvi::RunRecord r;
    r.problem = problem;
    r.start_id = start;
    r.solver = solver;
    r.iters = iters;
    r.time_ms = ms;
    r.final_opt = 1e-9;
    r.final_feas = 0.0;
    r.status = status;
    r.eoc = 1.0;
    return r;
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST_CASE("optimality measure on bounded sets") {
    // gradient (1,0) over the unit ball: worst feasible direction gives 1
    const auto ball = fixed_set_problem("ballopt", {1.0, 0.0},
                                        qvi::ConvexSet(qvi::Ball({0.0, 0.0}, 1.0)), {0.0, 0.0});
    CHECK(std::abs(qvi::opt_measure(ball, {0.0, 0.0}) - 1.0) <= 1e-12);

    // gradient (1,-2) over the unit box from the origin corner: exactly 2
    const auto box = fixed_set_problem("boxopt", {1.0, -2.0},
                                       qvi::ConvexSet(qvi::Box({0.0, 0.0}, {1.0, 1.0})),
                                       {0.0, 0.0});
    CHECK(qvi::opt_measure(box, {0.0, 0.0}) == 2.0);

    // at the exact solution the measure vanishes: x* = (0, 1) for q = (1, -2)
    CHECK(std::abs(qvi::opt_measure(box, {0.0, 1.0})) <= 1e-12);

    // halfspace: only a vanishing gradient yields a bounded linear program
    const auto half = fixed_set_problem("halfopt", {0.0, 0.0},
                                        qvi::ConvexSet(qvi::Halfspace({1.0, 0.0}, 3.0)),
                                        {0.0, 0.0});
    CHECK(qvi::opt_measure(half, {0.0, 0.0}) == 0.0);
}

TEST_CASE("optimality measure refuses unbounded linear programs") {
    using Catch::Matchers::ContainsSubstring;

    const auto half = fixed_set_problem("halfubd", {1.0, 0.0},
                                        qvi::ConvexSet(qvi::Halfspace({1.0, 0.0}, 0.0)),
                                        {0.0, 0.0});
    CHECK_THROWS_WITH(qvi::opt_measure(half, {0.0, 0.0}), ContainsSubstring("natural_residual"));

    const auto ray = fixed_set_problem("rayubd", {-5.0}, qvi::ConvexSet(qvi::Box({0.0}, {INFINITY})),
                                       {0.0});
    CHECK_THROWS_WITH(qvi::opt_measure(ray, {0.0}),
                      ContainsSubstring("unbounded over the box"));
}

TEST_CASE("feasibility measure") {
    const auto box = fixed_set_problem("boxfeas", {0.0}, qvi::ConvexSet(qvi::Box({0.0}, {1.0})),
                                       {0.5});
    CHECK(qvi::feas_measure(box, {1.5}) == 0.5);
    CHECK(qvi::feas_measure(box, {0.5}) == 0.0);

    const auto ball = fixed_set_problem("ballfeas", {0.0, 0.0},
                                        qvi::ConvexSet(qvi::Ball({3.0, 4.0}, 1.0)), {3.0, 4.0});
    CHECK(qvi::feas_measure(ball, {0.0, 0.0}) == 4.0);

    // the moving set shifts with the query point
    const auto moving = qvi::suite_problem("analytic1d");
    // K(0.1) = 0.02 + [0.1, 10] = [0.12, 10.02], so 0.1 sits 0.02 outside
    CHECK(std::abs(qvi::feas_measure(moving, {0.1}) - 0.02) <= 1e-15);

    // termination combines both measures; x* = 0 solves A(x) = x on [0, 1]
    const auto t = qvi::check_termination(box, {0.0}, 1e-6);
    CHECK(t.done);
    const auto t2 = qvi::check_termination(box, {1.5}, 1e-6);
    CHECK_FALSE(t2.done);
    CHECK(t2.feas == 0.5);
}

TEST_CASE("experimental order of convergence") {
    // quadratic-then-slower synthetic steps: windows (2.0, 1.5), last wins
    const auto quad = trace_with_steps({1e-1, 1e-2, 1e-3, 1e-4});
    const auto windows = qvi::eoc_all(quad);
    REQUIRE(windows.size() == 2);
    CHECK(windows[0].k == 0);
    CHECK(std::abs(windows[0].value - 2.0) <= 1e-12);
    CHECK(windows[1].k == 1);
    CHECK(std::abs(windows[1].value - 1.5) <= 1e-12);
    CHECK(std::abs(qvi::eoc(quad) - 1.5) <= 1e-12);
    CHECK(std::abs(qvi::eoc_or_nan(quad) - 1.5) <= 1e-12);

    // geometric decay c^k: the order tends to 1 from above
    std::vector<double> geo;
    for (int k = 1; k <= 10; ++k) geo.push_back(std::pow(0.5, k));
    const auto lin = trace_with_steps(geo);
    CHECK(std::abs(qvi::eoc(lin) - 9.0 / 8.0) <= 1e-10);  // max(log r^8/log r^7, log r^9/log r^8)

    // constant steps inside (0,1) give order exactly 1
    CHECK(qvi::eoc(trace_with_steps({0.5, 0.5, 0.5, 0.5})) == 1.0);

    // inadmissible norms are skipped, windows report their anchor index
    const auto skip = trace_with_steps({0.5, 2.0, 1e-1, 1e-2, 1e-3});
    const auto sw = qvi::eoc_all(skip);
    REQUIRE(sw.size() == 1);
    CHECK(sw[0].k == 2);
    CHECK(std::abs(sw[0].value - 2.0) <= 1e-12);

    // undefined cases throw, and eoc_or_nan maps them to NaN
    CHECK_THROWS_AS(qvi::eoc(trace_with_steps({0.5, 0.5})), std::domain_error);
    CHECK_THROWS_WITH(qvi::eoc(trace_with_steps({2.0, 3.0, 4.0, 5.0})),
                      Catch::Matchers::ContainsSubstring("EOC undefined"));
    CHECK(std::isnan(qvi::eoc_or_nan(trace_with_steps({2.0, 3.0, 4.0, 5.0}))));
    CHECK(std::isnan(qvi::eoc_or_nan(trace_with_steps({0.0, 0.0, 0.0, 0.0}))));
}

TEST_CASE("performance ratio table") {
    using qvi::Status;
    std::vector<qvi::RunRecord> rows = {
        row("p", 0, "s1", 1, 1.0, Status::SolvedToTol),
        row("p", 0, "s2", 2, 5.0, Status::SolvedToTol),
        row("q", 0, "s1", 8, 8.0, Status::SolvedToTol),
        row("q", 0, "s2", 2, 2.0, Status::SolvedToTol),
    };

    const auto t = qvi::performance_ratios(rows, qvi::PerfMetric::Iters);
    REQUIRE(t.solvers == std::vector<std::string>{"s1", "s2"});
    REQUIRE(t.instances == std::vector<std::string>{"p#0", "q#0"});
    CHECK(t.ratios[0] == std::vector<double>{1.0, 4.0});
    CHECK(t.ratios[1] == std::vector<double>{2.0, 1.0});
    CHECK(t.excluded.empty());

    const auto tt = qvi::performance_ratios(rows, qvi::PerfMetric::Time);
    CHECK(tt.ratios[0] == std::vector<double>{1.0, 4.0});
    CHECK(tt.ratios[1] == std::vector<double>{5.0, 1.0});

    // profile curves over an explicit grid
    const auto c1 = qvi::profile_curve(t, "s1", {1.0, 2.0, 4.0});
    CHECK(c1.points == std::vector<std::pair<double, double>>{{1.0, 0.5}, {2.0, 0.5}, {4.0, 1.0}});
    const auto c2 = qvi::profile_curve(t, "s2", {1.0, 2.0, 4.0});
    CHECK(c2.points == std::vector<std::pair<double, double>>{{1.0, 0.5}, {2.0, 1.0}, {4.0, 1.0}});

    // failures count as infinite ratios; they never satisfy any threshold
    rows[3].status = Status::MaxIterReached;
    const auto tf = qvi::performance_ratios(rows, qvi::PerfMetric::Iters);
    CHECK(tf.ratios[0] == std::vector<double>{1.0, 1.0});
    CHECK(std::isinf(tf.ratios[1][1]));
    const auto cf = qvi::profile_curve(tf, "s2", {1.0, 1e9});
    CHECK(cf.points.back().second == 0.5);

    // an instance failed by every solver is excluded and reported
    rows.push_back(row("r", 0, "s1", 10, 1.0, Status::Diverged));
    rows.push_back(row("r", 0, "s2", 10, 1.0, Status::MaxIterReached));
    const auto te = qvi::performance_ratios(rows, qvi::PerfMetric::Iters);
    CHECK(te.instances == std::vector<std::string>{"p#0", "q#0"});
    CHECK(te.excluded == std::vector<std::string>{"r#0"});

    // diagnostics
    CHECK_THROWS_WITH(qvi::performance_ratios({}, qvi::PerfMetric::Iters),
                      Catch::Matchers::ContainsSubstring("no records"));
    rows.pop_back();  // drop s2's record for instance r#0
    CHECK_THROWS_WITH(qvi::performance_ratios(rows, qvi::PerfMetric::Iters),
                      Catch::Matchers::ContainsSubstring("missing record"));
    CHECK_THROWS_WITH(qvi::profile_curve(t, "s3", {1.0}),
                      Catch::Matchers::ContainsSubstring("unknown solver"));
    CHECK_THROWS_AS(qvi::profile_curve(t, "s1", {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(qvi::profile_curve(t, "s1", {4.0, 2.0}), std::invalid_argument);

    // every instance excluded: the curve has no denominator left
    std::vector<qvi::RunRecord> dead = {row("p", 0, "s1", 1, 1.0, Status::MaxIterReached)};
    const auto td = qvi::performance_ratios(dead, qvi::PerfMetric::Iters);
    CHECK(td.excluded == std::vector<std::string>{"p#0"});
    CHECK_THROWS_WITH(qvi::profile_curve(td, "s1", {1.0}),
                      Catch::Matchers::ContainsSubstring("no instances"));
}

TEST_CASE("linear-rate report on the one-dimensional problem") {
    const auto p = qvi::suite_problem("analytic1d");

    // admissible off-center tuple: step size 1, averaging weight 1/3
    qvi::ContractionParams params(1.0, 1.0, 0.2, 1.0, 1.0 / 3.0, 1.0 / 3.0);
    CHECK(params.beta == 0.2);
    CHECK(params.rho == 0.64);

    qvi::SolverConfig cfg;
    cfg.gamma = 1.0;
    cfg.theta = qvi::Schedule::constant(1.0 / 3.0);
    cfg.tol = -1.0;
    cfg.max_iter = 40;
    const auto trace = qvi::solve_proposed(p, cfg, p.starts.front());

    const auto report = qvi::rate_report(trace, *p.reference, params);
    CHECK(report.rho_theoretical == 0.64);
    CHECK(report.beta == 0.2);
    CHECK(report.bound_violations == 0);
    CHECK(report.geo_violations_pair == 0);
    CHECK(report.geo_violations_companion == 0);
    CHECK(report.v0 > 0.0);
    CHECK(report.rho_empirical > 0.0);
    CHECK(report.rho_empirical <= report.rho_theoretical + 0.05);
}

TEST_CASE("linear-rate report edge cases") {
    const auto p = qvi::suite_problem("analytic1d");
    qvi::SolverConfig cfg;
    cfg.gamma = p.certified->gamma;
    cfg.theta = qvi::Schedule::constant(p.certified->a);
    cfg.tol = -1.0;
    cfg.max_iter = 40;

    // starting exactly at the solution: everything at the noise floor,
    // reported as an exact-decay run with an empirical factor of zero
    const auto at_star = qvi::solve_proposed(p, cfg, *p.reference);
    const auto rep = qvi::rate_report(at_star, *p.reference, *p.certified);
    CHECK(rep.v0 == 0.0);
    CHECK(rep.rho_empirical == 0.0);
    CHECK(rep.bound_violations == 0);

    // traces that cannot be analyzed
    auto short_cfg = cfg;
    short_cfg.max_iter = 3;
    const auto short_trace = qvi::solve_proposed(p, short_cfg, p.starts.front());
    CHECK_THROWS_WITH(qvi::rate_report(short_trace, *p.reference, *p.certified),
                      Catch::Matchers::ContainsSubstring("too short"));

    const auto plain = qvi::solve_gradient_projection(p, cfg, p.starts.front());
    CHECK_THROWS_WITH(qvi::rate_report(plain, *p.reference, *p.certified),
                      Catch::Matchers::ContainsSubstring("averaged companion"));
}

TEST_CASE("run record construction") {
    const auto p = qvi::suite_problem("analytic1d");
    qvi::SolverConfig cfg;
    cfg.gamma = p.certified->gamma;
    cfg.tol = 1e-7;
    cfg.max_iter = 1000;
    const auto trace = qvi::solve_proposed(p, cfg, p.starts.front());

    const auto rec = qvi::make_run_record(trace, 3);
    CHECK(rec.problem == "analytic1d");
    CHECK(rec.start_id == 3);
    CHECK(rec.solver == "proposed");
    CHECK(rec.iters == trace.iters());
    CHECK(rec.final_opt == trace.final_opt());
    CHECK(rec.final_feas == trace.final_feas());
    CHECK(rec.status == qvi::Status::SolvedToTol);
    CHECK(same_double(rec.eoc, qvi::eoc_or_nan(trace)));
}

TEST_CASE("benchmark cells run in canonical order") {
    const std::vector<qvi::QviProblem> problems = {qvi::suite_problem("analytic1d"),
                                                   qvi::suite_problem("movbox2a")};
    const std::vector<qvi::Algorithm> algos = {qvi::Algorithm::Proposed, qvi::Algorithm::GradProj};
    qvi::SolverConfig base;
    base.tol = 1e-6;

    const auto seq = qvi::run_cells(problems, algos, base, 1);
    REQUIRE(seq.size() == (2 + 3) * 2);  // (starts of analytic1d + movbox2a) x 2 solvers
    CHECK(seq[0].problem == "analytic1d");
    CHECK(seq[0].solver == "proposed");
    CHECK(seq[1].solver == "gradproj");
    CHECK(seq[2].start_id == 1);
    CHECK(seq[4].problem == "movbox2a");

    // worker count must not affect anything but wall-clock fields
    const auto par = qvi::run_cells(problems, algos, base, 8);
    REQUIRE(par.size() == seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(par[i].problem == seq[i].problem);
        CHECK(par[i].start_id == seq[i].start_id);
        CHECK(par[i].solver == seq[i].solver);
        CHECK(par[i].iters == seq[i].iters);
        CHECK(same_double(par[i].final_opt, seq[i].final_opt));
        CHECK(same_double(par[i].final_feas, seq[i].final_feas));
        CHECK(par[i].status == seq[i].status);
        CHECK(same_double(par[i].eoc, seq[i].eoc));
    }

    CHECK_THROWS_WITH(qvi::run_cells({}, algos, base),
                      Catch::Matchers::ContainsSubstring("no problems"));
    CHECK_THROWS_WITH(qvi::run_cells(problems, {}, base),
                      Catch::Matchers::ContainsSubstring("no solvers"));
}

TEST_CASE("results round trip through the file format") {
    const std::vector<qvi::QviProblem> problems = {qvi::suite_problem("analytic1d")};
    qvi::SolverConfig base;
    base.tol = 1e-6;
    auto records = qvi::run_cells(problems, qvi::all_algorithms(), base, 1);

    // add rows that exercise NaN measures and non-success statuses
    auto odd = row("weird", 7, "proposed", 1, 0.25, qvi::Status::Diverged);
    odd.final_opt = std::numeric_limits<double>::quiet_NaN();
    odd.final_feas = std::numeric_limits<double>::quiet_NaN();
    odd.eoc = std::numeric_limits<double>::quiet_NaN();
    records.push_back(odd);

    std::stringstream buf;
    qvi::write_csv(records, buf);

    const auto parsed = qvi::parse_csv(buf);
    REQUIRE(parsed.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(parsed[i].problem == records[i].problem);
        CHECK(parsed[i].start_id == records[i].start_id);
        CHECK(parsed[i].solver == records[i].solver);
        CHECK(parsed[i].iters == records[i].iters);
        CHECK(same_double(parsed[i].time_ms, records[i].time_ms));
        CHECK(same_double(parsed[i].final_opt, records[i].final_opt));
        CHECK(same_double(parsed[i].final_feas, records[i].final_feas));
        CHECK(parsed[i].status == records[i].status);
        CHECK(same_double(parsed[i].eoc, records[i].eoc));
    }

    // the JSON form carries the same rows under "runs"
    const auto j = qvi::records_to_json(records);
    REQUIRE(j.contains("runs"));
    REQUIRE(j["runs"].size() == records.size());
    CHECK(j["runs"][0]["problem"] == "analytic1d");
    CHECK(j["runs"][0]["solver"] == "proposed");

    // loader diagnostics
    std::stringstream empty;
    CHECK_THROWS_WITH(qvi::parse_csv(empty), Catch::Matchers::ContainsSubstring("empty"));

    std::stringstream wrong("solver,iters\nx,1\n");
    CHECK_THROWS_WITH(qvi::parse_csv(wrong), Catch::Matchers::ContainsSubstring("header mismatch"));

    std::stringstream shortrow(std::string(qvi::kCsvHeader) + "\nanalytic1d,0,proposed,5\n");
    CHECK_THROWS_WITH(qvi::parse_csv(shortrow),
                      Catch::Matchers::ContainsSubstring("expected 9 fields"));

    std::stringstream badnum(std::string(qvi::kCsvHeader) +
                             "\nanalytic1d,zero,proposed,5,1.0,1e-9,0,SolvedToTol,1.5\n");
    CHECK_THROWS_AS(qvi::parse_csv(badnum), std::invalid_argument);
}

TEST_CASE("shortest round-trip double formatting") {
    CHECK(qvi::format_double(0.5) == "0.5");
    CHECK(qvi::format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(qvi::format_double(0.1) == "0.1");
    CHECK(qvi::format_double(1e300) == "1e+300");
    CHECK(qvi::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    for (double v : {1.0 / 7.0, 2.0 / 3.0, 1.2345678901234567e-8, 123456.789012345}) {
        const auto s = qvi::format_double(v);
        CHECK(std::stod(s) == v);
    }
}
