#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "measures.hpp"
#include "problem.hpp"
#include "schedule.hpp"

namespace qvi {

enum class Status { SolvedToTol, MaxIterReached, Diverged };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::SolvedToTol: return "SolvedToTol";
        case Status::MaxIterReached: return "MaxIterReached";
        case Status::Diverged: return "Diverged";
    }
    return "?";
}

inline Status parse_status(const std::string& name) {
    if (name == "SolvedToTol") return Status::SolvedToTol;
    if (name == "MaxIterReached") return Status::MaxIterReached;
    if (name == "Diverged") return Status::Diverged;
    throw std::invalid_argument("unknown status: " + name);
}

enum class Algorithm { Proposed, GradProj, ExtraGrad, Relaxed1, Relaxed2, InertialRelaxed };

inline const char* algorithm_tag(Algorithm a) {
    switch (a) {
        case Algorithm::Proposed: return "proposed";
        case Algorithm::GradProj: return "gradproj";
        case Algorithm::ExtraGrad: return "extragrad";
        case Algorithm::Relaxed1: return "relaxed1";
        case Algorithm::Relaxed2: return "relaxed2";
        case Algorithm::InertialRelaxed: return "inertial";
    }
    return "?";
}

inline Algorithm parse_algorithm(const std::string& tag) {
    if (tag == "proposed") return Algorithm::Proposed;
    if (tag == "gradproj") return Algorithm::GradProj;
    if (tag == "extragrad") return Algorithm::ExtraGrad;
    if (tag == "relaxed1") return Algorithm::Relaxed1;
    if (tag == "relaxed2") return Algorithm::Relaxed2;
    if (tag == "inertial") return Algorithm::InertialRelaxed;
    throw std::invalid_argument("unknown solver tag: " + tag);
}

inline const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> all = {Algorithm::Proposed,  Algorithm::GradProj,
                                               Algorithm::ExtraGrad, Algorithm::Relaxed1,
                                               Algorithm::Relaxed2,  Algorithm::InertialRelaxed};
    return all;
}

// Benchmark defaults: gamma = 0.5, stop when opt and feas both fall to
// 1e-4, cap at 1000 iterations, and the schedules theta_k = k/(5(k+1)),
// alpha_k = 1/(k+1), beta_k = 3k/(7k+9).
struct SolverConfig {
    Algorithm algorithm = Algorithm::Proposed;
    double gamma = 0.5;
    Schedule theta = Schedule::make(1.0, 0.0, 5.0, 5.0);
    Schedule alpha = Schedule::make(0.0, 1.0, 1.0, 1.0);
    Schedule beta_sched = Schedule::make(3.0, 0.0, 7.0, 9.0);
    double tol = 1e-4;
    int max_iter = 1000;
};

struct IterationRecord {
    int k;                 // subscript of the iterate stored in x
    Vec x;
    Vec z;                 // averaged companion sequence; only the proposed solver fills it
    double step_norm;      // ||x_k - x_{k-1}|| (first record measures from the start point)
    double opt;
    double feas;
    double elapsed_ms;     // cumulative wall clock; excluded from determinism guarantees
};

struct IterationTrace {
    std::string problem;
    std::string solver;
    Vec start;
    double gamma = 0.0;
    std::vector<IterationRecord> records;
    Status status = Status::MaxIterReached;
    Vec solution;
    double total_ms = 0.0;

    int iters() const { return static_cast<int>(records.size()); }
    double final_opt() const {
        return records.empty() ? std::numeric_limits<double>::quiet_NaN() : records.back().opt;
    }
    double final_feas() const {
        return records.empty() ? std::numeric_limits<double>::quiet_NaN() : records.back().feas;
    }
};

namespace detail {

constexpr double kDivergenceNorm = 1e12;

inline bool diverged(const Vec& x) { return !all_finite(x) || norm(x) > kDivergenceNorm; }

inline double now_ms(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline void validate_common(const SolverConfig& cfg) {
    if (!(cfg.gamma > 0.0))
        throw std::invalid_argument("solver: gamma must be positive");
    if (cfg.max_iter < 1)
        throw std::invalid_argument("solver: max_iter must be at least 1");
}

inline double theta_at(const Schedule& f, long long k) {
    const double th = f(k);
    if (!(th >= 0.0) || !(th < 1.0))
        throw std::invalid_argument("solver: theta schedule left [0,1) at k = " + std::to_string(k) +
                                    " (value " + std::to_string(th) + ")");
    return th;
}

inline double alpha_at(const Schedule& f, long long k) {
    const double al = f(k);
    if (!(al > 0.0) || al > 1.0)
        throw std::invalid_argument("solver: alpha schedule left (0,1] at k = " + std::to_string(k) +
                                    " (value " + std::to_string(al) + ")");
    return al;
}

inline double relax_beta_at(const Schedule& f, long long k) {
    const double be = f(k);
    if (!(be >= 0.0) || be > 1.0)
        throw std::invalid_argument("solver: beta schedule left [0,1] at k = " + std::to_string(k) +
                                    " (value " + std::to_string(be) + ")");
    return be;
}

// One projected step of the natural map at anchor point p:
// P_{K(anchor)}(p - gamma A(p)).
inline Vec natural_step(const QviProblem& problem, const Vec& anchor, const Vec& p, double gamma) {
    Vec g = problem.op(p);
    Vec arg(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) arg[i] = p[i] - gamma * g[i];
    return project_feasible_map(problem.feasible, anchor, arg);
}

}  // namespace detail

// Inertial averaged scheme. Iteration k >= 0, with z_{-1} = z_0 = start and
// theta_{-1} = theta_0:
//   y_{k-1} = z_k + ((1 - 2 theta_{k-1}) / theta_{k-1}) (z_k - z_{k-1})
//   x_k     = P_{K(y_{k-1})}(y_{k-1} - gamma A(y_{k-1}))
//   z_{k+1} = (1 - theta_k) z_k + theta_k x_k
// Record k stores the Lyapunov pair (x_k, z_k). When theta_{k-1} = 0 the
// extrapolation coefficient is 0/0; the scheme is equivalent to
// y_k = (1 - theta_{k-1}) x_{k-1} + theta_{k-1} z_{k-1}, whose limit is
// y_k = x_{k-1}, so that branch takes a plain projection step from x_{k-1}.
// (With theta == 0 throughout, the method degenerates to gradient projection.)
inline IterationTrace solve_proposed(const QviProblem& problem, const SolverConfig& cfg, const Vec& start) {
    detail::validate_common(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    IterationTrace trace;
    trace.problem = problem.name;
    trace.solver = algorithm_tag(Algorithm::Proposed);
    trace.start = start;
    trace.gamma = cfg.gamma;
    trace.records.reserve(static_cast<std::size_t>(cfg.max_iter));

    Vec z_prev = start;
    Vec z_cur = start;
    Vec x_prev = start;
    double theta_prev = detail::theta_at(cfg.theta, 0);

    for (int k = 0; k < cfg.max_iter; ++k) {
        Vec y;
        if (k == 0) {
            y = z_cur;  // z_{-1} := z_0, so the extrapolation term vanishes
        } else if (theta_prev == 0.0) {
            y = x_prev;
        } else {
            const double factor = (1.0 - 2.0 * theta_prev) / theta_prev;
            y = Vec(z_cur.size());
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] = z_cur[i] + factor * (z_cur[i] - z_prev[i]);
        }

        Vec x = detail::natural_step(problem, y, y, cfg.gamma);
        const double theta_k = detail::theta_at(cfg.theta, k);
        Vec z_next = lincomb(1.0 - theta_k, z_cur, theta_k, x);

        IterationRecord rec;
        rec.k = k;
        rec.x = x;
        rec.z = z_cur;
        rec.step_norm = dist(x, x_prev);

        if (detail::diverged(x) || detail::diverged(z_next)) {
            rec.opt = std::numeric_limits<double>::quiet_NaN();
            rec.feas = std::numeric_limits<double>::quiet_NaN();
            rec.elapsed_ms = detail::now_ms(t0);
            trace.records.push_back(std::move(rec));
            trace.status = Status::Diverged;
            trace.solution = x;
            break;
        }

        const auto tc = check_termination(problem, x, cfg.tol);
        rec.opt = tc.opt;
        rec.feas = tc.feas;
        rec.elapsed_ms = detail::now_ms(t0);
        trace.records.push_back(std::move(rec));

        if (tc.done) {
            trace.status = Status::SolvedToTol;
            trace.solution = x;
            break;
        }

        x_prev = std::move(x);
        z_prev = std::move(z_cur);
        z_cur = std::move(z_next);
        theta_prev = theta_k;

        if (k + 1 == cfg.max_iter) {
            trace.status = Status::MaxIterReached;
            trace.solution = x_prev;
        }
    }

    trace.total_ms = detail::now_ms(t0);
    return trace;
}

namespace detail {

// Shared chassis for the baseline schemes: each produces x_{k+1} from x_k
// via `update`, and the trace records x_{k+1} under index k+1.
template <class Update>
inline IterationTrace run_baseline(const QviProblem& problem, const SolverConfig& cfg, const Vec& start,
                                   Algorithm algo, Update&& update) {
    validate_common(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    IterationTrace trace;
    trace.problem = problem.name;
    trace.solver = algorithm_tag(algo);
    trace.start = start;
    trace.gamma = cfg.gamma;
    trace.records.reserve(static_cast<std::size_t>(cfg.max_iter));

    Vec x = start;
    for (int k = 0; k < cfg.max_iter; ++k) {
        Vec x_next = update(x, k);

        IterationRecord rec;
        rec.k = k + 1;
        rec.x = x_next;
        rec.step_norm = dist(x_next, x);

        if (diverged(x_next)) {
            rec.opt = std::numeric_limits<double>::quiet_NaN();
            rec.feas = std::numeric_limits<double>::quiet_NaN();
            rec.elapsed_ms = now_ms(t0);
            trace.records.push_back(std::move(rec));
            trace.status = Status::Diverged;
            trace.solution = x_next;
            break;
        }

        const auto tc = check_termination(problem, x_next, cfg.tol);
        rec.opt = tc.opt;
        rec.feas = tc.feas;
        rec.elapsed_ms = now_ms(t0);
        trace.records.push_back(std::move(rec));

        if (tc.done) {
            trace.status = Status::SolvedToTol;
            trace.solution = x_next;
            break;
        }

        x = std::move(x_next);
        if (k + 1 == cfg.max_iter) {
            trace.status = Status::MaxIterReached;
            trace.solution = x;
        }
    }

    trace.total_ms = now_ms(t0);
    return trace;
}

}  // namespace detail

// Fixed-point iteration of the natural map: x_{k+1} = P_{K(x_k)}(x_k - gamma A(x_k)).
inline IterationTrace solve_gradient_projection(const QviProblem& problem, const SolverConfig& cfg,
                                                const Vec& start) {
    return detail::run_baseline(problem, cfg, start, Algorithm::GradProj, [&](const Vec& x, int) {
        return detail::natural_step(problem, x, x, cfg.gamma);
    });
}

// Extragradient: probe y_k = P_{K(x_k)}(x_k - gamma A(x_k)), then correct
// x_{k+1} = P_{K(x_k)}(x_k - gamma A(y_k)); both projections onto K(x_k).
inline IterationTrace solve_extragradient(const QviProblem& problem, const SolverConfig& cfg,
                                          const Vec& start) {
    return detail::run_baseline(problem, cfg, start, Algorithm::ExtraGrad, [&](const Vec& x, int) {
        Vec y = detail::natural_step(problem, x, x, cfg.gamma);
        Vec g = problem.op(y);
        Vec arg(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) arg[i] = x[i] - cfg.gamma * g[i];
        return project_feasible_map(problem.feasible, x, arg);
    });
}

// Relaxed natural-map iteration:
// x_{k+1} = (1 - alpha_k) x_k + alpha_k P_{K(x_k)}(x_k - gamma A(x_k)).
inline IterationTrace solve_relaxed1(const QviProblem& problem, const SolverConfig& cfg, const Vec& start) {
    return detail::run_baseline(problem, cfg, start, Algorithm::Relaxed1, [&](const Vec& x, int k) {
        const double al = detail::alpha_at(cfg.alpha, k);
        Vec p = detail::natural_step(problem, x, x, cfg.gamma);
        return lincomb(1.0 - al, x, al, p);
    });
}

// Two-stage relaxed iteration: an inner relaxed probe
// y_k = (1 - beta_k) x_k + beta_k P_{K(x_k)}(x_k - gamma A(x_k)),
// then x_{k+1} = (1 - alpha_k) x_k + alpha_k P_{K(y_k)}(y_k - gamma A(y_k)).
// The second projection anchors at y_k.
inline IterationTrace solve_relaxed2(const QviProblem& problem, const SolverConfig& cfg, const Vec& start) {
    return detail::run_baseline(problem, cfg, start, Algorithm::Relaxed2, [&](const Vec& x, int k) {
        const double al = detail::alpha_at(cfg.alpha, k);
        const double be = detail::relax_beta_at(cfg.beta_sched, k);
        Vec p = detail::natural_step(problem, x, x, cfg.gamma);
        Vec y = lincomb(1.0 - be, x, be, p);
        Vec py = detail::natural_step(problem, y, y, cfg.gamma);
        return lincomb(1.0 - al, x, al, py);
    });
}

// Inertial extrapolation y_k = x_k + theta_k (x_k - x_{k-1}) with x_{-1} = x_0,
// then the relaxed step x_{k+1} = (1 - alpha_k) y_k + alpha_k P_{K(y_k)}(y_k - gamma A(y_k)).
inline IterationTrace solve_inertial_relaxed(const QviProblem& problem, const SolverConfig& cfg,
                                             const Vec& start) {
    Vec x_prev = start;
    return detail::run_baseline(problem, cfg, start, Algorithm::InertialRelaxed,
                                [&, x_prev](const Vec& x, int k) mutable {
        const double th = detail::theta_at(cfg.theta, k);
        const double al = detail::alpha_at(cfg.alpha, k);
        Vec y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + th * (x[i] - x_prev[i]);
        Vec py = detail::natural_step(problem, y, y, cfg.gamma);
        Vec next = lincomb(1.0 - al, y, al, py);
        x_prev = x;
        return next;
    });
}

inline IterationTrace solve(const QviProblem& problem, const SolverConfig& cfg, const Vec& start) {
    switch (cfg.algorithm) {
        case Algorithm::Proposed: return solve_proposed(problem, cfg, start);
        case Algorithm::GradProj: return solve_gradient_projection(problem, cfg, start);
        case Algorithm::ExtraGrad: return solve_extragradient(problem, cfg, start);
        case Algorithm::Relaxed1: return solve_relaxed1(problem, cfg, start);
        case Algorithm::Relaxed2: return solve_relaxed2(problem, cfg, start);
        case Algorithm::InertialRelaxed: return solve_inertial_relaxed(problem, cfg, start);
    }
    throw std::logic_error("solve: unhandled algorithm");
}

inline IterationTrace solve(const QviProblem& problem, const SolverConfig& cfg) {
    return solve(problem, cfg, problem.starts.front());
}

}  // namespace qvi
