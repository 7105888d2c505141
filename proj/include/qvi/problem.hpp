#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "feasible_map.hpp"
#include "linalg.hpp"
#include "operator.hpp"
#include "params.hpp"

namespace qvi {

// One benchmark instance: a certified affine operator, a feasible map, and
// starting points. `reference` is the independently computed solution (see
// reference_solution below); `certified` bundles the constants under which
// the linear-rate guarantee applies.
struct QviProblem {
    std::string name;
    AffineOperator op;
    FeasibleMap feasible;
    std::vector<Vec> starts;
    std::optional<Vec> reference;
    std::optional<ContractionParams> certified;

    QviProblem(std::string name_, AffineOperator op_, FeasibleMap feasible_,
               std::vector<Vec> starts_, std::optional<Vec> reference_ = std::nullopt,
               std::optional<ContractionParams> certified_ = std::nullopt)
        : name(std::move(name_)),
          op(std::move(op_)),
          feasible(std::move(feasible_)),
          starts(std::move(starts_)),
          reference(std::move(reference_)),
          certified(std::move(certified_)) {
        const std::size_t n = op.dim();
        if (feasible.dim() != n)
            throw std::invalid_argument(name + ": feasible map dimension " +
                                        std::to_string(feasible.dim()) +
                                        " does not match operator dimension " + std::to_string(n));
        if (starts.empty())
            throw std::invalid_argument(name + ": at least one starting point required");
        for (const auto& s : starts) {
            if (s.size() != n)
                throw std::invalid_argument(name + ": starting point has wrong dimension");
            if (!all_finite(s))
                throw std::invalid_argument(name + ": starting point has non-finite entries");
        }
        if (reference && reference->size() != n)
            throw std::invalid_argument(name + ": reference has wrong dimension");
        if (certified) {
            // Certified constants must be at least as conservative as the
            // operator's own certificates and the map's sensitivity bound,
            // otherwise the rate guarantee they encode is vacuous.
            constexpr double slack = 1e-9;
            if (certified->mu > op.mu + slack)
                throw std::invalid_argument(name + ": certified mu exceeds the operator certificate");
            if (certified->lip < op.lip - slack)
                throw std::invalid_argument(name + ": certified lip is below the operator certificate");
            if (certified->lambda < lambda_certificate(feasible) - slack)
                throw std::invalid_argument(name + ": certified lambda is below the map sensitivity");
        }
    }

    bool operator==(const QviProblem&) const = default;

    std::size_t dim() const { return op.dim(); }

    double lambda() const {
        return certified ? certified->lambda : lambda_certificate(feasible);
    }
};

// Independent solution oracle: the Banach–Picard iteration of the natural map
//   x  <-  P_{K(x)}(x - gamma* A(x)),   gamma* = mu / lip^2,
// which is a certified contraction under the problem's sensitivity condition.
// Deliberately separate from the benchmark solvers so their results can be
// validated against it. Stops when the step falls below tol * max(1, ||x||).
inline Vec reference_solution(const QviProblem& problem, double tol = 1e-13) {
    if (!problem.certified)
        throw std::invalid_argument("reference_solution(" + problem.name +
                                    "): certified params required");
    const double gamma_star = problem.certified->mu / (problem.certified->lip * problem.certified->lip);
    Vec x = problem.starts.front();
    constexpr long long max_iter = 1000000;
    for (long long k = 0; k < max_iter; ++k) {
        Vec g = problem.op(x);
        Vec arg(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) arg[i] = x[i] - gamma_star * g[i];
        Vec next = project_feasible_map(problem.feasible, x, arg);
        const double step = dist(next, x);
        x = std::move(next);
        if (!all_finite(x))
            throw std::runtime_error("reference_solution(" + problem.name +
                                     "): iteration produced non-finite values");
        if (step <= tol * std::max(1.0, norm(x))) return x;
    }
    throw std::runtime_error("reference_solution(" + problem.name +
                             "): no contraction progress in 10^6 iterations");
}

// Same oracle from an arbitrary start; used by the uniqueness probe.
inline Vec reference_solution_from(const QviProblem& problem, const Vec& start, double tol = 1e-13) {
    QviProblem p = problem;
    p.starts = {start};
    return reference_solution(p, tol);
}

}  // namespace qvi
