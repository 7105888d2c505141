#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "measures.hpp"
#include "problem.hpp"

namespace qvi {

namespace detail {

using nlohmann::json;

inline const json& field(const json& j, const std::string& key, const std::string& ctx) {
    const auto it = j.find(key);
    if (it == j.end())
        throw std::invalid_argument(ctx + ": missing field '" + key + "'");
    return *it;
}

inline Vec vec_field(const json& j, const std::string& key, const std::string& ctx) {
    const json& f = field(j, key, ctx);
    if (!f.is_array())
        throw std::invalid_argument(ctx + ": field '" + key + "' must be an array of numbers");
    Vec v;
    v.reserve(f.size());
    for (const auto& e : f) {
        if (!e.is_number())
            throw std::invalid_argument(ctx + ": field '" + key + "' must contain only numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

inline ConvexSet parse_set(const json& j, const std::string& ctx) {
    const std::string kind = field(j, "kind", ctx).get<std::string>();
    if (kind == "box") {
        return ConvexSet(Box(vec_field(j, "lo", ctx + " (box)"), vec_field(j, "hi", ctx + " (box)")));
    }
    if (kind == "ball") {
        return ConvexSet(Ball(vec_field(j, "center", ctx + " (ball)"),
                              field(j, "radius", ctx + " (ball)").get<double>()));
    }
    if (kind == "halfspace") {
        return ConvexSet(Halfspace(vec_field(j, "normal", ctx + " (halfspace)"),
                                   field(j, "offset", ctx + " (halfspace)").get<double>()));
    }
    if (kind == "intersection") {
        const json& members = field(j, "members", ctx + " (intersection)");
        if (!members.is_array() || members.empty())
            throw std::invalid_argument(ctx + ": intersection needs a nonempty 'members' array");
        Intersection inter;
        for (const auto& m : members) inter.members.push_back(parse_set(m, ctx + " member"));
        if (j.contains("tol")) inter.tol = j["tol"].get<double>();
        if (j.contains("max_iter")) inter.max_iter = j["max_iter"].get<int>();
        return ConvexSet(std::move(inter));
    }
    throw std::invalid_argument(ctx + ": unknown set kind '" + kind + "'");
}

inline json set_to_json(const ConvexSet& s) {
    json j;
    if (const auto* b = std::get_if<Box>(&s.shape)) {
        j["kind"] = "box";
        j["lo"] = b->lo;
        j["hi"] = b->hi;
    } else if (const auto* b = std::get_if<Ball>(&s.shape)) {
        j["kind"] = "ball";
        j["center"] = b->center;
        j["radius"] = b->radius;
    } else if (const auto* h = std::get_if<Halfspace>(&s.shape)) {
        j["kind"] = "halfspace";
        j["normal"] = h->normal;
        j["offset"] = h->offset;
    } else if (const auto* in = std::get_if<Intersection>(&s.shape)) {
        j["kind"] = "intersection";
        json members = json::array();
        for (const auto& m : in->members) members.push_back(set_to_json(m));
        j["members"] = std::move(members);
        j["tol"] = in->tol;
        j["max_iter"] = in->max_iter;
    }
    return j;
}

inline DenseMatrix matrix_field(const json& j, const std::string& key, std::size_t n,
                                const std::string& ctx) {
    Vec flat = vec_field(j, key, ctx);
    if (flat.size() != n * n)
        throw std::invalid_argument(ctx + ": field '" + key + "' must hold " + std::to_string(n * n) +
                                    " row-major entries, got " + std::to_string(flat.size()));
    return DenseMatrix(n, n, std::move(flat));
}

}  // namespace detail

// Builds a problem from its parsed document. Operator constants are always
// certified from the data (never trusted from the file); the map sensitivity
// comes from lambda_certificate. An optional "gamma" (with optional
// "theta_bounds": [a, b], default [1/3, 1/3]) declares a certified step size
// and must be admissible, or loading fails with the admissible interval.
inline QviProblem parse_problem(const nlohmann::json& j, const std::string& ctx) {
    using detail::field;
    using detail::vec_field;

    const std::string name = field(j, "name", ctx).get<std::string>();
    const std::string where = ctx + " (" + name + ")";

    const auto n = field(j, "n", where).get<std::size_t>();
    if (n == 0) throw std::invalid_argument(where + ": dimension n must be positive");

    DenseMatrix M = detail::matrix_field(j, "M", n, where);
    Vec q = vec_field(j, "q", where);
    if (q.size() != n)
        throw std::invalid_argument(where + ": q must have " + std::to_string(n) + " entries");

    const auto [mu, lip] = certify_mu_lip(M);  // throws "not strongly monotone" when unfit
    AffineOperator op(std::move(M), std::move(q), mu, lip);

    const nlohmann::json& fj = field(j, "feasible", where);
    ConvexSet base = detail::parse_set(fj, where + " feasible");
    DenseMatrix C(n, n, 0.0);
    Vec d(n, 0.0);
    if (fj.contains("C")) C = detail::matrix_field(fj, "C", n, where + " feasible");
    if (fj.contains("d")) {
        d = vec_field(fj, "d", where + " feasible");
        if (d.size() != n)
            throw std::invalid_argument(where + ": feasible.d must have " + std::to_string(n) +
                                        " entries");
    }
    FeasibleMap feasible(std::move(C), std::move(d), std::move(base));

    const nlohmann::json& sj = field(j, "starts", where);
    if (!sj.is_array() || sj.empty())
        throw std::invalid_argument(where + ": starts must be a nonempty array of points");
    std::vector<Vec> starts;
    for (std::size_t i = 0; i < sj.size(); ++i) {
        if (!sj[i].is_array())
            throw std::invalid_argument(where + ": starts[" + std::to_string(i) +
                                        "] must be an array");
        Vec s;
        for (const auto& e : sj[i]) s.push_back(e.get<double>());
        starts.push_back(std::move(s));
    }

    std::optional<Vec> reference;
    if (j.contains("reference")) reference = vec_field(j, "reference", where);

    std::optional<ContractionParams> certified;
    if (j.contains("gamma")) {
        const double gamma = j["gamma"].get<double>();
        double a = 1.0 / 3.0, b = 1.0 / 3.0;
        if (j.contains("theta_bounds")) {
            const Vec ab = vec_field(j, "theta_bounds", where);
            if (ab.size() != 2)
                throw std::invalid_argument(where + ": theta_bounds must be [a, b]");
            a = ab[0];
            b = ab[1];
        }
        const double lambda = lambda_certificate(feasible);
        try {
            certified.emplace(mu, lip, lambda, gamma, a, b);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + ": declared gamma not certifiable: " + e.what());
        }
    }

    QviProblem problem(name, std::move(op), std::move(feasible), std::move(starts),
                       std::move(reference), std::move(certified));
    validate_problem(problem);
    return problem;
}

inline QviProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_problem: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("load_problem: " + path + ": " + e.what());
    }
    return parse_problem(j, path);
}

inline nlohmann::json problem_to_json(const QviProblem& problem) {
    nlohmann::json j;
    j["name"] = problem.name;
    j["n"] = problem.dim();
    j["M"] = problem.op.M.data;
    j["q"] = problem.op.q;
    nlohmann::json fj = detail::set_to_json(problem.feasible.base);
    bool moving = false;
    for (const double v : problem.feasible.C.data)
        if (v != 0.0) moving = true;
    for (const double v : problem.feasible.d)
        if (v != 0.0) moving = true;
    if (moving) {
        fj["C"] = problem.feasible.C.data;
        fj["d"] = problem.feasible.d;
    }
    j["feasible"] = std::move(fj);
    j["starts"] = problem.starts;
    if (problem.reference) j["reference"] = *problem.reference;
    if (problem.certified) {
        j["gamma"] = problem.certified->gamma;
        j["theta_bounds"] = {problem.certified->a, problem.certified->b};
    }
    return j;
}

inline void save_problem(const QviProblem& problem, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_problem: cannot open '" + path + "' for writing");
    out << problem_to_json(problem).dump(2) << "\n";
    if (!out)
        throw std::runtime_error("save_problem: write to '" + path + "' failed");
}

}  // namespace qvi
