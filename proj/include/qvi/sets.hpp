#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "linalg.hpp"

namespace qvi {

struct ConvexSet;

// Axis-aligned box lo <= x <= hi. Bounds may be +-infinity on either side.
struct Box {
    Vec lo, hi;

    bool operator==(const Box&) const = default;

    Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (lo.size() != hi.size())
            throw std::invalid_argument("Box: lo and hi must have the same dimension");
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (std::isnan(lo[i]) || std::isnan(hi[i]))
                throw std::invalid_argument("Box: bounds must not be NaN");
            if (lo[i] > hi[i])
                throw std::invalid_argument("Box: lo exceeds hi in component " + std::to_string(i));
        }
    }
};

// Euclidean ball ||x - center|| <= radius.
struct Ball {
    Vec center;
    double radius;

    bool operator==(const Ball&) const = default;

    Ball(Vec center_, double radius_) : center(std::move(center_)), radius(radius_) {
        if (!(radius >= 0.0))
            throw std::invalid_argument("Ball: radius must be nonnegative");
        if (!all_finite(center))
            throw std::invalid_argument("Ball: center must be finite");
    }
};

// Halfspace normal . x <= offset.
struct Halfspace {
    Vec normal;
    double offset;

    bool operator==(const Halfspace&) const = default;

    Halfspace(Vec normal_, double offset_) : normal(std::move(normal_)), offset(offset_) {
        if (!all_finite(normal) || !std::isfinite(offset))
            throw std::invalid_argument("Halfspace: normal and offset must be finite");
        if (norm_sq(normal) == 0.0)
            throw std::invalid_argument("Halfspace: normal must be nonzero");
    }
};

// Intersection of convex sets; projection runs Dykstra's alternating scheme.
struct Intersection {
    std::vector<ConvexSet> members;
    double tol = 1e-12;
    int max_iter = 10000;

    bool operator==(const Intersection&) const = default;
};

struct ConvexSet {
    std::variant<Box, Ball, Halfspace, Intersection> shape;

    ConvexSet(Box b) : shape(std::move(b)) {}
    ConvexSet(Ball b) : shape(std::move(b)) {}
    ConvexSet(Halfspace h) : shape(std::move(h)) {}
    ConvexSet(Intersection i) : shape(std::move(i)) {}

    bool operator==(const ConvexSet& o) const { return shape == o.shape; }
};

inline std::size_t set_dim(const ConvexSet& s);

inline std::size_t set_dim(const ConvexSet& s) {
    return std::visit(
        [](const auto& v) -> std::size_t {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Box>) return v.lo.size();
            else if constexpr (std::is_same_v<T, Ball>) return v.center.size();
            else if constexpr (std::is_same_v<T, Halfspace>) return v.normal.size();
            else {
                if (v.members.empty())
                    throw std::invalid_argument("Intersection: no members");
                const std::size_t n = set_dim(v.members.front());
                for (const auto& m : v.members)
                    if (set_dim(m) != n)
                        throw std::invalid_argument("Intersection: members disagree on dimension");
                return n;
            }
        },
        s.shape);
}

inline Vec project(const ConvexSet& s, const Vec& z);

inline Vec project(const Box& b, const Vec& z) {
    if (z.size() != b.lo.size())
        throw std::invalid_argument("project(Box): dimension mismatch");
    Vec r(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) r[i] = std::clamp(z[i], b.lo[i], b.hi[i]);
    return r;
}

inline Vec project(const Ball& b, const Vec& z) {
    if (z.size() != b.center.size())
        throw std::invalid_argument("project(Ball): dimension mismatch");
    const double d = dist(z, b.center);
    if (d <= b.radius) return z;
    const double t = b.radius / d;
    Vec r(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) r[i] = b.center[i] + t * (z[i] - b.center[i]);
    return r;
}

inline Vec project(const Halfspace& h, const Vec& z) {
    if (z.size() != h.normal.size())
        throw std::invalid_argument("project(Halfspace): dimension mismatch");
    const double slack = dot(h.normal, z) - h.offset;
    if (slack <= 0.0) return z;
    const double t = slack / norm_sq(h.normal);
    Vec r(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) r[i] = z[i] - t * h.normal[i];
    return r;
}

// Dykstra's algorithm: cyclic projections with per-set correction terms.
// Converges to the exact metric projection onto the (nonempty) intersection.
inline Vec project(const Intersection& s, const Vec& z) {
    if (s.members.empty())
        throw std::invalid_argument("project(Intersection): no members");
    const std::size_t m = s.members.size();
    Vec x = z;
    std::vector<Vec> corr(m, Vec(z.size(), 0.0));
    double cycle_shift = 0.0;
    for (int it = 0; it < s.max_iter; ++it) {
        cycle_shift = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            Vec y = add(x, corr[i]);
            Vec xn = project(s.members[i], y);
            for (std::size_t j = 0; j < y.size(); ++j) corr[i][j] = y[j] - xn[j];
            cycle_shift = std::max(cycle_shift, dist(x, xn));
            x = std::move(xn);
        }
        if (cycle_shift <= s.tol) return x;
    }
    throw std::runtime_error("project(Intersection): alternating projections did not converge in " +
                             std::to_string(s.max_iter) + " cycles (last cycle still moved " +
                             std::to_string(cycle_shift) + ")");
}

inline Vec project(const ConvexSet& s, const Vec& z) {
    return std::visit([&](const auto& v) { return project(v, z); }, s.shape);
}

// Geometric constraint violation: zero inside the set, positive outside.
// Box: worst componentwise bound violation. Ball: distance beyond the radius.
// Halfspace: raw slack normal . x - offset (not normalized).
// Intersection: worst violation over the members.
inline double violation(const ConvexSet& s, const Vec& x);

inline double violation(const Box& b, const Vec& x) {
    if (x.size() != b.lo.size())
        throw std::invalid_argument("violation(Box): dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        worst = std::max(worst, b.lo[i] - x[i]);
        worst = std::max(worst, x[i] - b.hi[i]);
    }
    return worst;
}

inline double violation(const Ball& b, const Vec& x) {
    return std::max(0.0, dist(x, b.center) - b.radius);
}

inline double violation(const Halfspace& h, const Vec& x) {
    return std::max(0.0, dot(h.normal, x) - h.offset);
}

inline double violation(const Intersection& s, const Vec& x) {
    double worst = 0.0;
    for (const auto& m : s.members) worst = std::max(worst, violation(m, x));
    return worst;
}

inline double violation(const ConvexSet& s, const Vec& x) {
    return std::visit([&](const auto& v) { return violation(v, x); }, s.shape);
}

inline bool contains(const ConvexSet& s, const Vec& x, double tol = 0.0) {
    return violation(s, x) <= tol;
}

// Componentwise intersection when the whole tree is boxes; nullopt when any
// member is not a box or the result is empty.
inline std::optional<Box> flatten_boxes(const ConvexSet& s) {
    if (const auto* b = std::get_if<Box>(&s.shape)) return *b;
    const auto* in = std::get_if<Intersection>(&s.shape);
    if (!in || in->members.empty()) return std::nullopt;
    auto acc = flatten_boxes(in->members.front());
    if (!acc) return std::nullopt;
    for (std::size_t i = 1; i < in->members.size(); ++i) {
        auto next = flatten_boxes(in->members[i]);
        if (!next || next->lo.size() != acc->lo.size()) return std::nullopt;
        for (std::size_t j = 0; j < acc->lo.size(); ++j) {
            acc->lo[j] = std::max(acc->lo[j], next->lo[j]);
            acc->hi[j] = std::min(acc->hi[j], next->hi[j]);
            if (acc->lo[j] > acc->hi[j]) return std::nullopt;
        }
    }
    return acc;
}

// A finite axis-aligned enclosure, when one can be derived: boxes and balls
// directly, intersections from any member that has one. Halfspaces alone
// give none.
inline std::optional<Box> bounding_box(const ConvexSet& s) {
    if (const auto* b = std::get_if<Box>(&s.shape)) {
        for (std::size_t i = 0; i < b->lo.size(); ++i)
            if (!std::isfinite(b->lo[i]) || !std::isfinite(b->hi[i])) return std::nullopt;
        return *b;
    }
    if (const auto* b = std::get_if<Ball>(&s.shape)) {
        Vec lo(b->center.size()), hi(b->center.size());
        for (std::size_t i = 0; i < b->center.size(); ++i) {
            lo[i] = b->center[i] - b->radius;
            hi[i] = b->center[i] + b->radius;
        }
        return Box(std::move(lo), std::move(hi));
    }
    if (const auto* in = std::get_if<Intersection>(&s.shape)) {
        std::optional<Box> acc;
        for (const auto& m : in->members) {
            auto bb = bounding_box(m);
            if (!bb) continue;
            if (!acc) {
                acc = std::move(bb);
                continue;
            }
            for (std::size_t j = 0; j < acc->lo.size(); ++j) {
                acc->lo[j] = std::max(acc->lo[j], bb->lo[j]);
                acc->hi[j] = std::min(acc->hi[j], bb->hi[j]);
            }
        }
        return acc;
    }
    return std::nullopt;
}

inline bool is_bounded(const ConvexSet& s) { return bounding_box(s).has_value(); }

}  // namespace qvi
