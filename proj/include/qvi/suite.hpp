#pragma once

// Builtin benchmark problems. Every problem is constructed from explicit
// constants (spectra, rotation angles, solution points) so repeated builds
// produce bit-identical data. Solutions are placed by construction: we pick
// x*, the binding geometry, and the operator value v = A(x*), then solve
// backward for q and the map offset d. That makes x* an exact fixed point of
// x = P_{K(x)}(x - gamma A(x)) for every admissible gamma, so the stored
// reference is correct up to rounding in the assembled constants.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "feasible_map.hpp"
#include "linalg.hpp"
#include "operator.hpp"
#include "params.hpp"
#include "problem.hpp"
#include "sets.hpp"

namespace qvi {

namespace detail {

struct PlaneRotation {
    int i = 0;
    int j = 1;
    double angle = 0.0;
};

// M <- G M G^T for the plane rotation G acting on coordinates (i, j).
// Conjugating preserves the spectrum of the symmetric part.
inline void rotate_conjugate(DenseMatrix& M, const PlaneRotation& rot) {
    const double c = std::cos(rot.angle);
    const double s = std::sin(rot.angle);
    const auto i = static_cast<std::size_t>(rot.i);
    const auto j = static_cast<std::size_t>(rot.j);
    for (std::size_t col = 0; col < M.cols; ++col) {  // rows i, j of G M
        const double a = M(i, col);
        const double b = M(j, col);
        M(i, col) = c * a - s * b;
        M(j, col) = s * a + c * b;
    }
    for (std::size_t row = 0; row < M.rows; ++row) {  // columns i, j of (G M) G^T
        const double a = M(row, i);
        const double b = M(row, j);
        M(row, i) = c * a - s * b;
        M(row, j) = s * a + c * b;
    }
}

// M <- G M (left application only; used to build scaled orthogonal maps).
inline void rotate_left(DenseMatrix& M, const PlaneRotation& rot) {
    const double c = std::cos(rot.angle);
    const double s = std::sin(rot.angle);
    const auto i = static_cast<std::size_t>(rot.i);
    const auto j = static_cast<std::size_t>(rot.j);
    for (std::size_t col = 0; col < M.cols; ++col) {
        const double a = M(i, col);
        const double b = M(j, col);
        M(i, col) = c * a - s * b;
        M(j, col) = s * a + c * b;
    }
}

// Symmetric matrix with the given spectrum, rotated by a fixed plan.
inline DenseMatrix rotated_spectrum(const std::vector<double>& spectrum,
                                    const std::vector<PlaneRotation>& plan) {
    const std::size_t n = spectrum.size();
    DenseMatrix M(n, n);
    for (std::size_t i = 0; i < n; ++i) M(i, i) = spectrum[i];
    for (const auto& rot : plan) rotate_conjugate(M, rot);
    return M;
}

// scale * (product of plane rotations): sigma_max is exactly |scale|.
inline DenseMatrix scaled_rotation(std::size_t n, double scale,
                                   const std::vector<PlaneRotation>& plan) {
    DenseMatrix C = DenseMatrix::identity(n);
    for (const auto& rot : plan) rotate_left(C, rot);
    for (double& entry : C.data) entry *= scale;
    return C;
}

// Adds skew * (e_i e_j^T - e_j e_i^T) pairs; leaves the symmetric part alone.
inline void add_skew(DenseMatrix& M, double skew) {
    for (std::size_t i = 0; i + 1 < M.rows; i += 2) {
        M(i, i + 1) += skew;
        M(i + 1, i) -= skew;
    }
}

inline ContractionParams certify_suite(const DenseMatrix& M, const DenseMatrix& C) {
    const auto [mu, lip] = certify_mu_lip(M);
    const double lambda = sigma_max(C);
    return ContractionParams(mu, lip, lambda, 0.5, 0.5, 0.5);
}

// Assembles a moving-set problem whose solution is pinned at `xstar` with
// operator value `v` there: q = v - M x*, and the map offset is chosen so the
// designated binding point of the base set lands exactly on x* - c(x*).
// `anchor` is that binding point expressed in base-set coordinates.
inline QviProblem pinned_problem(std::string name, DenseMatrix M, DenseMatrix C,
                                 ConvexSet base, const Vec& xstar, const Vec& v,
                                 const Vec& anchor, std::vector<Vec> starts) {
    const std::size_t n = xstar.size();
    Vec q = matvec(M, xstar);
    for (std::size_t i = 0; i < n; ++i) q[i] = v[i] - q[i];

    Vec d = matvec(C, xstar);
    for (std::size_t i = 0; i < n; ++i) d[i] = xstar[i] - d[i] - anchor[i];

    auto params = certify_suite(M, C);
    AffineOperator op(std::move(M), std::move(q), params.mu, params.lip);
    FeasibleMap map(std::move(C), std::move(d), std::move(base));
    return QviProblem(std::move(name), std::move(op), std::move(map), std::move(starts),
                      xstar, params);
}

inline Vec constant_vec(std::size_t n, double value) { return Vec(n, value); }

// x* + spread * pattern, with the pattern cycling over {+1, -0.7, +0.4, -1}.
inline Vec offset_start(const Vec& xstar, double spread) {
    static constexpr double pattern[4] = {1.0, -0.7, 0.4, -1.0};
    Vec s = xstar;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += spread * pattern[i % 4];
    return s;
}

}  // namespace detail

// --- Individual builtin problems -------------------------------------------

// 1-D moving box K(x) = [0.1 + 0.2 x, 10 + 0.2 x] with A(x) = x. The lower
// bound binds at the solution: x* = 0.1 / 0.8 = 0.125.
inline QviProblem suite_analytic1d() {
    DenseMatrix M(1, 1);
    M(0, 0) = 1.0;
    DenseMatrix C(1, 1);
    C(0, 0) = 0.2;
    auto params = detail::certify_suite(M, C);
    AffineOperator op(M, Vec{0.0}, params.mu, params.lip);
    FeasibleMap map(C, Vec{0.0}, ConvexSet(Box(Vec{0.1}, Vec{10.0})));
    return QviProblem("analytic1d", std::move(op), std::move(map), {Vec{0.3}, Vec{0.05}},
                      Vec{0.125}, params);
}

// Moving boxes: the solution sits on the lower corner of K(x*), pressed there
// by a strictly positive operator value.
inline QviProblem suite_movbox2a() {
    auto M = detail::rotated_spectrum({1.0, 1.4}, {{0, 1, 0.6}});
    auto C = detail::scaled_rotation(2, 0.1, {{0, 1, 0.35}});
    const Vec xstar{0.35, 0.3};
    const Vec v{0.8, 0.6};
    const Vec lo{0.0, 0.0};
    const Vec hi{3.0, 3.0};
    return detail::pinned_problem("movbox2a", std::move(M), std::move(C),
                                  ConvexSet(Box(lo, hi)), xstar, v, lo,
                                  {Vec{0.7, 0.55}, Vec{0.15, 0.5}, Vec{0.55, 0.05}});
}

inline QviProblem suite_movbox5a() {
    auto M = detail::rotated_spectrum({1.0, 1.1, 1.2, 1.3, 1.4},
                                      {{0, 1, 0.4}, {1, 2, -0.3}, {2, 4, 0.7}, {0, 3, 0.25}});
    auto C = detail::scaled_rotation(5, 0.2, {{0, 2, 0.5}, {1, 3, -0.45}, {2, 4, 0.3}});
    const Vec xstar{0.3, -0.2, 0.45, 0.1, -0.35};
    const Vec v{0.9, 0.7, 1.1, 0.8, 0.6};
    const Vec lo{-0.5, -1.0, -0.25, -0.6, -1.1};
    const Vec hi{2.5, 2.0, 2.75, 2.4, 1.9};
    Vec anchor = lo;  // binds every coordinate at the lower face
    return detail::pinned_problem("movbox5a", std::move(M), std::move(C),
                                  ConvexSet(Box(lo, hi)), xstar, v, anchor,
                                  {detail::offset_start(xstar, 0.2),
                                   detail::offset_start(xstar, -0.15),
                                   Vec{0.5, -0.05, 0.2, 0.3, -0.2}});
}

inline QviProblem suite_movbox50a() {
    const std::size_t n = 50;
    std::vector<double> spectrum(n);
    for (std::size_t i = 0; i < n; ++i)
        spectrum[i] = 0.9 + 0.6 * static_cast<double>(i) / static_cast<double>(n - 1);
    auto M = detail::rotated_spectrum(
        spectrum, {{0, 49, 0.5}, {10, 30, -0.4}, {5, 25, 0.3}, {20, 40, 0.45}, {15, 35, -0.25}});
    auto C = detail::scaled_rotation(n, 0.1, {{0, 25, 0.4}, {12, 37, -0.3}});

    Vec xstar(n), v(n), lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i);
        xstar[i] = 0.2 + 0.01 * t - 0.25 * static_cast<double>(i % 3);
        v[i] = 0.7 + 0.02 * static_cast<double>(i % 7);
        lo[i] = xstar[i] - 0.3 - 0.002 * t;  // placed so the shifted corner is x*
        hi[i] = lo[i] + 4.0;
    }
    return detail::pinned_problem("movbox50a", std::move(M), std::move(C),
                                  ConvexSet(Box(lo, hi)), xstar, v, lo,
                                  {detail::offset_start(xstar, 0.06),
                                   detail::offset_start(xstar, -0.05)});
}

// Moving balls: the solution sits on the sphere of K(x*), pressed inward by
// A(x*) = -s nu for the outward unit normal nu at the binding point.
inline QviProblem suite_movball(std::string name, std::vector<double> spectrum,
                                std::vector<detail::PlaneRotation> mplan, double lambda,
                                std::vector<detail::PlaneRotation> cplan, double radius,
                                double press, const Vec& xstar, double skew,
                                std::vector<Vec> starts) {
    const std::size_t n = xstar.size();
    auto M = detail::rotated_spectrum(spectrum, mplan);
    if (skew != 0.0) detail::add_skew(M, skew);
    auto C = detail::scaled_rotation(n, lambda, cplan);

    Vec nu(n);
    const double inv = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) nu[i] = (i % 2 == 0 ? inv : -inv);

    Vec v(n), anchor(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = -press * nu[i];
        anchor[i] = radius * nu[i];  // base ball is centered at the origin
    }
    return detail::pinned_problem(std::move(name), std::move(M), std::move(C),
                                  ConvexSet(Ball(detail::constant_vec(n, 0.0), radius)), xstar,
                                  v, anchor, std::move(starts));
}

inline QviProblem suite_movball2a() {
    const Vec xstar{0.4, -0.15};
    return suite_movball("movball2a", {1.1, 1.45}, {{0, 1, 0.5}}, 0.1, {{0, 1, -0.4}}, 0.5, 4.0,
                         xstar, 0.0,
                         {detail::offset_start(xstar, 0.25), detail::offset_start(xstar, -0.2),
                          Vec{0.55, 0.2}});
}

inline QviProblem suite_movball5a() {
    const Vec xstar{0.25, 0.4, -0.3, 0.1, -0.2};
    return suite_movball("movball5a", {1.0, 1.1, 1.2, 1.3, 1.4},
                         {{0, 2, 0.45}, {1, 3, -0.35}, {2, 4, 0.6}}, 0.1,
                         {{0, 4, 0.3}, {1, 2, -0.5}}, 0.6, 4.0, xstar, 0.0,
                         {detail::offset_start(xstar, 0.18), detail::offset_start(xstar, -0.14),
                          Vec{0.1, 0.6, -0.05, -0.1, -0.1}});
}

inline QviProblem suite_movball5b() {
    const Vec xstar{-0.1, 0.35, 0.2, -0.4, 0.15};
    return suite_movball("movball5b", {1.2, 1.25, 1.3, 1.4, 1.45},
                         {{0, 1, 0.7}, {2, 3, -0.55}, {1, 4, 0.4}}, 0.2,
                         {{0, 3, 0.6}, {2, 4, -0.35}}, 0.45, 5.0, xstar, 0.15,
                         {detail::offset_start(xstar, 0.16), detail::offset_start(xstar, -0.12)});
}

inline QviProblem suite_movball20a() {
    const std::size_t n = 20;
    Vec xstar(n);
    for (std::size_t i = 0; i < n; ++i)
        xstar[i] = 0.3 - 0.04 * static_cast<double>(i % 5) + 0.01 * static_cast<double>(i);
    std::vector<double> spectrum(n);
    for (std::size_t i = 0; i < n; ++i)
        spectrum[i] = 1.1 + 0.4 * static_cast<double>(i) / static_cast<double>(n - 1);
    return suite_movball("movball20a", std::move(spectrum),
                         {{0, 19, 0.5}, {4, 12, -0.4}, {7, 15, 0.35}, {2, 9, -0.3}}, 0.2,
                         {{0, 10, 0.45}, {5, 15, -0.4}}, 0.7, 5.0, xstar, 0.0,
                         {detail::offset_start(xstar, 0.07), detail::offset_start(xstar, -0.06)});
}

// Constant-set problems (lambda = 0, sanity tier).
inline QviProblem suite_constbox3() {
    auto M = detail::rotated_spectrum({1.0, 1.2, 1.4}, {{0, 1, 0.5}, {1, 2, -0.4}});
    auto C = DenseMatrix(3, 3);  // zero map: the set never moves
    const Vec xstar{-1.0, -0.8, -1.2};
    const Vec v{1.1, 0.9, 1.3};
    const Vec lo = xstar;  // binding lower corner of the fixed box
    const Vec hi{1.0, 1.2, 0.8};
    return detail::pinned_problem("constbox3", std::move(M), std::move(C),
                                  ConvexSet(Box(lo, hi)), xstar, v, lo,
                                  {detail::offset_start(xstar, 0.25),
                                   detail::offset_start(xstar, -0.2)});
}

inline QviProblem suite_constball4() {
    const Vec xstar{0.35, -0.35, 0.35, -0.35};  // on the sphere of radius 0.7
    return suite_movball("constball4", {1.0, 1.15, 1.3, 1.5}, {{0, 2, 0.4}, {1, 3, -0.6}}, 0.0,
                         {}, 0.7, 4.0, xstar, 0.0,
                         {detail::offset_start(xstar, 0.2), detail::offset_start(xstar, -0.16)});
}

// Intersection of two overlapping boxes under a constant map; the solution
// binds at a corner of the overlap region.
inline QviProblem suite_boxint2() {
    auto M = detail::rotated_spectrum({1.0, 1.3}, {{0, 1, -0.5}});
    auto C = DenseMatrix(2, 2);
    const Vec xstar{0.4, 0.0};  // lower corner of the overlap of the two boxes
    const Vec v{0.9, 0.7};
    Intersection both;
    both.members.push_back(ConvexSet(Box(Vec{0.0, 0.0}, Vec{1.0, 1.0})));
    both.members.push_back(ConvexSet(Box(Vec{0.4, -0.3}, Vec{1.7, 0.8})));
    return detail::pinned_problem("boxint2", std::move(M), std::move(C),
                                  ConvexSet(std::move(both)), xstar, v, xstar,
                                  {Vec{0.9, 0.5}, Vec{0.2, -0.4}});
}

inline const std::vector<QviProblem>& builtin_suite() {
    static const std::vector<QviProblem> suite = [] {
        std::vector<QviProblem> v;
        v.push_back(suite_analytic1d());
        v.push_back(suite_movball2a());
        v.push_back(suite_movball5a());
        v.push_back(suite_movball5b());
        v.push_back(suite_movball20a());
        v.push_back(suite_movbox2a());
        v.push_back(suite_movbox5a());
        v.push_back(suite_movbox50a());
        v.push_back(suite_constbox3());
        v.push_back(suite_constball4());
        v.push_back(suite_boxint2());
        return v;
    }();
    return suite;
}

inline const QviProblem& suite_problem(const std::string& name) {
    for (const auto& p : builtin_suite())
        if (p.name == name) return p;
    throw std::invalid_argument("unknown builtin problem: " + name);
}

}  // namespace qvi
