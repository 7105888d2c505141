#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "linalg.hpp"
#include "sets.hpp"

namespace qvi {

// Moving feasible set K(x) = c(x) + base with affine center map c(x) = C x + d.
// Projections onto K(x) reduce to a shift of the base projection:
//   P_{K(x)}(z) = c(x) + P_base(z - c(x)).
// The map's sensitivity constant is the operator norm of C; C = 0 recovers a
// fixed constraint set.
struct FeasibleMap {
    DenseMatrix C;
    Vec d;
    ConvexSet base;

    FeasibleMap(DenseMatrix C_, Vec d_, ConvexSet base_)
        : C(std::move(C_)), d(std::move(d_)), base(std::move(base_)) {
        if (!C.square())
            throw std::invalid_argument("FeasibleMap: C must be square");
        if (C.rows != d.size())
            throw std::invalid_argument("FeasibleMap: d has dimension " + std::to_string(d.size()) +
                                        " but C is " + std::to_string(C.rows) + "x" + std::to_string(C.cols));
        if (set_dim(base) != C.rows)
            throw std::invalid_argument("FeasibleMap: base set dimension " + std::to_string(set_dim(base)) +
                                        " does not match C (" + std::to_string(C.rows) + ")");
    }

    bool operator==(const FeasibleMap&) const = default;

    std::size_t dim() const { return C.rows; }

    Vec center(const Vec& x) const {
        Vec c = matvec(C, x);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += d[i];
        return c;
    }
};

// Exact metric projection of z onto K(x).
inline Vec project_feasible_map(const FeasibleMap& map, const Vec& x, const Vec& z) {
    const Vec c = map.center(x);
    Vec shifted = sub(z, c);
    Vec p = project(map.base, shifted);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += c[i];
    return p;
}

// Geometric violation of z with respect to K(x); zero iff z is in K(x).
inline double feasible_map_violation(const FeasibleMap& map, const Vec& x, const Vec& z) {
    return violation(map.base, sub(z, map.center(x)));
}

// Certified sensitivity: ||P_{K(x)}(z) - P_{K(y)}(z)|| <= 2*sigma_max(C)*||x - y||
// in general, and the translation structure here gives the tighter constant
// sigma_max(C) itself.
inline double lambda_certificate(const FeasibleMap& map) { return sigma_max(map.C); }

}  // namespace qvi
