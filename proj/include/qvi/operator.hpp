#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "linalg.hpp"

namespace qvi {

// Affine operator A(x) = M x + q with certified strong-monotonicity and
// Lipschitz constants. The certificate is validated on construction:
// mu must not exceed the smallest eigenvalue of the symmetric part of M,
// and lip must cover the largest singular value of M (both up to a small
// numerical slack).
struct AffineOperator {
    DenseMatrix M;
    Vec q;
    double mu;
    double lip;

    AffineOperator(DenseMatrix M_, Vec q_, double mu_, double lip_)
        : M(std::move(M_)), q(std::move(q_)), mu(mu_), lip(lip_) {
        if (!M.square())
            throw std::invalid_argument("AffineOperator: M must be square");
        if (M.rows != q.size())
            throw std::invalid_argument("AffineOperator: q has dimension " + std::to_string(q.size()) +
                                        " but M is " + std::to_string(M.rows) + "x" + std::to_string(M.cols));
        if (!(mu > 0.0))
            throw std::invalid_argument("AffineOperator: mu must be positive");
        if (mu > lip)
            throw std::invalid_argument("AffineOperator: mu must not exceed lip");
        constexpr double slack = 1e-9;
        const double lmin = lambda_min_sym(M);
        if (mu > lmin + slack)
            throw std::invalid_argument("AffineOperator: certificate mu = " + std::to_string(mu) +
                                        " exceeds lambda_min of the symmetric part (" +
                                        std::to_string(lmin) + ")");
        const double smax = sigma_max(M);
        if (lip < smax - slack)
            throw std::invalid_argument("AffineOperator: certificate lip = " + std::to_string(lip) +
                                        " is below sigma_max (" + std::to_string(smax) + ")");
    }

    bool operator==(const AffineOperator&) const = default;

    std::size_t dim() const { return M.rows; }

    Vec operator()(const Vec& x) const {
        Vec r = matvec(M, x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += q[i];
        return r;
    }
};

inline Vec apply_operator(const AffineOperator& A, const Vec& x) { return A(x); }

// Tightest certifiable constants for M: mu = lambda_min((M + M^T)/2),
// lip = sigma_max(M). Throws when the symmetric part is not positive
// definite, i.e. the operator is not strongly monotone.
inline std::pair<double, double> certify_mu_lip(const DenseMatrix& M) {
    if (!M.square()) throw std::invalid_argument("certify_mu_lip: M must be square");
    const double mu = lambda_min_sym(M);
    if (!(mu > 0.0))
        throw std::invalid_argument("certify_mu_lip: not strongly monotone (lambda_min of the "
                                    "symmetric part is " + std::to_string(mu) + ")");
    const double lip = sigma_max(M);
    return {mu, lip};
}

}  // namespace qvi
