#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "params.hpp"
#include "solvers.hpp"

namespace qvi {

// One benchmark cell: (problem, start, solver) -> outcome summary.
struct RunRecord {
    std::string problem;
    int start_id = 0;
    std::string solver;
    int iters = 0;
    double time_ms = 0.0;
    double final_opt = std::numeric_limits<double>::quiet_NaN();
    double final_feas = std::numeric_limits<double>::quiet_NaN();
    Status status = Status::MaxIterReached;
    double eoc = std::numeric_limits<double>::quiet_NaN();
};

// Experimental order of convergence over a window of three consecutive step
// norms (s_k, s_{k+1}, s_{k+2}):
//   max( log s_{k+1} / log s_k,  log s_{k+2} / log s_{k+1} ).
// A window is admissible when all three norms lie strictly in (0,1); the
// lists below report every admissible window, and eoc() evaluates the last.
struct EocWindow {
    int k;  // index of the first step norm in the window
    double value;
};

inline std::vector<EocWindow> eoc_all(const IterationTrace& trace) {
    std::vector<double> s;
    s.reserve(trace.records.size());
    for (const auto& r : trace.records) s.push_back(r.step_norm);

    std::vector<EocWindow> windows;
    if (s.size() < 3) return windows;
    const auto admissible = [](double v) { return v > 0.0 && v < 1.0; };
    for (std::size_t k = 0; k + 2 < s.size(); ++k) {
        if (!admissible(s[k]) || !admissible(s[k + 1]) || !admissible(s[k + 2])) continue;
        const double r1 = std::log(s[k + 1]) / std::log(s[k]);
        const double r2 = std::log(s[k + 2]) / std::log(s[k + 1]);
        windows.push_back({static_cast<int>(k), std::max(r1, r2)});
    }
    return windows;
}

inline double eoc(const IterationTrace& trace) {
    if (trace.records.size() < 3)
        throw std::domain_error("EOC undefined: trace has fewer than four iterates");
    const auto windows = eoc_all(trace);
    if (windows.empty())
        throw std::domain_error("EOC undefined: no window with step norms strictly inside (0,1)");
    return windows.back().value;
}

inline double eoc_or_nan(const IterationTrace& trace) {
    try {
        return eoc(trace);
    } catch (const std::domain_error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

inline RunRecord make_run_record(const IterationTrace& trace, int start_id) {
    RunRecord r;
    r.problem = trace.problem;
    r.start_id = start_id;
    r.solver = trace.solver;
    r.iters = trace.iters();
    r.time_ms = trace.total_ms;
    r.final_opt = trace.final_opt();
    r.final_feas = trace.final_feas();
    r.status = trace.status;
    r.eoc = eoc_or_nan(trace);
    return r;
}

enum class PerfMetric { Iters, Time };

// Solver-by-instance performance ratios r[s][i] = t_{s,i} / min_s' t_{s',i}.
// Failed runs count as +infinity; instances where every solver failed are
// excluded and reported so the caller can warn.
struct RatioTable {
    std::vector<std::string> solvers;
    std::vector<std::string> instances;       // "problem#start" labels, insertion order
    std::vector<std::vector<double>> ratios;  // ratios[solver][instance]
    std::vector<std::string> excluded;        // labels of all-failed instances
};

inline RatioTable performance_ratios(const std::vector<RunRecord>& records, PerfMetric metric) {
    std::vector<std::string> solvers;
    std::vector<std::string> instances;
    std::map<std::pair<std::string, std::string>, double> cost;  // (solver, instance) -> t

    const auto find = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };

    for (const auto& r : records) {
        const std::string instance = r.problem + "#" + std::to_string(r.start_id);
        if (!find(solvers, r.solver)) solvers.push_back(r.solver);
        if (!find(instances, instance)) instances.push_back(instance);
        const double t = r.status != Status::SolvedToTol ? std::numeric_limits<double>::infinity()
                         : metric == PerfMetric::Iters   ? static_cast<double>(r.iters)
                                                         : r.time_ms;
        cost[{r.solver, instance}] = t;
    }
    if (solvers.empty())
        throw std::invalid_argument("performance_ratios: no records");
    for (const auto& s : solvers)
        for (const auto& i : instances)
            if (!cost.count({s, i}))
                throw std::invalid_argument("performance_ratios: missing record for solver '" + s +
                                            "' on instance '" + i + "'");

    RatioTable table;
    table.solvers = solvers;
    for (const auto& i : instances) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& s : solvers) best = std::min(best, cost[{s, i}]);
        if (std::isinf(best)) {
            table.excluded.push_back(i);
            continue;
        }
        table.instances.push_back(i);
        for (std::size_t si = 0; si < solvers.size(); ++si) {
            if (table.ratios.size() <= si) table.ratios.emplace_back();
            const double t = cost[{solvers[si], i}];
            double ratio;
            if (std::isinf(t)) ratio = std::numeric_limits<double>::infinity();
            else if (best == 0.0) ratio = t == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
            else ratio = t / best;
            table.ratios[si].push_back(ratio);
        }
    }
    if (table.ratios.empty()) table.ratios.resize(solvers.size());
    return table;
}

// Distribution rho_s(T): fraction of instances solver s handles within a
// factor T of the best solver.
struct ProfileCurve {
    std::string solver;
    std::vector<std::pair<double, double>> points;  // (T, rho)
};

inline ProfileCurve profile_curve(const RatioTable& table, const std::string& solver,
                                  const std::vector<double>& grid) {
    if (table.instances.empty())
        throw std::invalid_argument("profile_curve: no instances (all excluded or empty input)");
    const auto it = std::find(table.solvers.begin(), table.solvers.end(), solver);
    if (it == table.solvers.end())
        throw std::invalid_argument("profile_curve: unknown solver '" + solver + "'");
    const auto& row = table.ratios[static_cast<std::size_t>(it - table.solvers.begin())];

    double prev = 0.0;
    ProfileCurve curve;
    curve.solver = solver;
    for (const double T : grid) {
        if (T < 1.0)
            throw std::invalid_argument("profile_curve: grid values must be >= 1");
        if (T < prev)
            throw std::invalid_argument("profile_curve: grid must be sorted ascending");
        prev = T;
        std::size_t solved = 0;
        for (const double r : row)
            if (r <= T) ++solved;
        curve.points.emplace_back(T, static_cast<double>(solved) / static_cast<double>(row.size()));
    }
    return curve;
}

// Executable form of the linear-rate guarantee. V_k pairs the projected
// iterate with its averaged companion: V_k = ||x_k - x*||^2 + ||z_k - x*||^2.
// The per-step bound demands V_{k+1} <= rho V_k (+ 1e-9 slack); the report
// also counts violations of the two closed-form geometric bounds
//   ||x_{k+1} - x*||^2 <= rho^{k+1} V_0            (pair form)
//   ||x_{k+1} - x*||^2 <= 2 rho^{k+1} ||x_0 - x*||^2   (companion form,
// which silently identifies z_0 with x_0 and can differ when the first
// projected iterate moves away from the start).
struct RateReport {
    double rho_theoretical = 0.0;
    double rho_empirical = 0.0;
    double beta = 0.0;
    double v0 = 0.0;
    int bound_violations = 0;
    int geo_violations_pair = 0;
    int geo_violations_companion = 0;
};

inline RateReport rate_report(const IterationTrace& trace, const Vec& x_star,
                              const ContractionParams& params) {
    if (trace.records.size() < 5)
        throw std::invalid_argument("rate_report: trace too short (< 5 iterations)");
    for (const auto& r : trace.records)
        if (r.z.empty())
            throw std::invalid_argument("rate_report: trace lacks the averaged companion sequence; "
                                        "run the proposed solver");

    const std::size_t n = trace.records.size();
    std::vector<double> V(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& r = trace.records[k];
        const double dx = dist(r.x, x_star);
        const double dz = dist(r.z, x_star);
        V[k] = dx * dx + dz * dz;
    }

    RateReport report;
    report.rho_theoretical = params.rho;
    report.beta = params.beta;
    report.v0 = V[0];

    constexpr double slack = 1e-9;
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (V[k + 1] > params.rho * V[k] + slack) ++report.bound_violations;

    const double dx0 = dist(trace.records[0].x, x_star);
    double geo = params.rho;  // rho^{k+1} at k = 0
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double dxk1 = dist(trace.records[k + 1].x, x_star);
        const double err = dxk1 * dxk1;
        if (err > geo * V[0] + slack) ++report.geo_violations_pair;
        if (err > 2.0 * geo * dx0 * dx0 + slack) ++report.geo_violations_companion;
        geo *= params.rho;
    }

    // Fitted empirical rate: least-squares slope of log V_k against k over
    // the tail half, ignoring any trailing stretch at the floating-point
    // noise floor (it would flatten the fit).
    const double floor = std::max(1e-28, 1e-26 * std::max(1.0, V[0]));
    std::size_t cutoff = n;
    for (std::size_t k = 0; k < n; ++k) {
        if (V[k] <= floor) {
            cutoff = k;
            break;
        }
    }
    const std::size_t lo = cutoff / 2;
    if (cutoff - lo < 2) {
        report.rho_empirical = 0.0;  // decayed to the floor too fast to fit
        return report;
    }
    double sk = 0.0, sv = 0.0, skk = 0.0, skv = 0.0;
    const double m = static_cast<double>(cutoff - lo);
    for (std::size_t k = lo; k < cutoff; ++k) {
        const double kk = static_cast<double>(k);
        const double lv = std::log(V[k]);
        sk += kk;
        sv += lv;
        skk += kk * kk;
        skv += kk * lv;
    }
    const double denom = m * skk - sk * sk;
    const double slope = denom == 0.0 ? 0.0 : (m * skv - sk * sv) / denom;
    report.rho_empirical = std::exp(slope);
    return report;
}

}  // namespace qvi
