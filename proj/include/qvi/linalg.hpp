#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvi {

using Vec = std::vector<double>;

inline void require_same_dim(const Vec& x, const Vec& y, const char* where) {
    if (x.size() != y.size())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
}

inline bool all_finite(const Vec& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

inline double inner_product(const Vec& x, const Vec& y) {
    require_same_dim(x, y, "inner_product");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

// short form used throughout the solvers
inline double dot(const Vec& x, const Vec& y) { return inner_product(x, y); }

inline double norm_sq(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(norm_sq(x)); }

inline double dist(const Vec& x, const Vec& y) {
    require_same_dim(x, y, "dist");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline Vec add(const Vec& x, const Vec& y) {
    require_same_dim(x, y, "add");
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

inline Vec sub(const Vec& x, const Vec& y) {
    require_same_dim(x, y, "sub");
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

inline Vec scale(double a, const Vec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
    return r;
}

// a*x + b*y
inline Vec lincomb(double a, const Vec& x, double b, const Vec& y) {
    require_same_dim(x, y, "lincomb");
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i] + b * y[i];
    return r;
}

// Dense row-major matrix. Square when used as an operator.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // rows*cols, row-major

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}
    DenseMatrix(std::size_t r, std::size_t c, std::vector<double> d)
        : rows(r), cols(c), data(std::move(d)) {
        if (data.size() != rows * cols)
            throw std::invalid_argument("DenseMatrix: data size " + std::to_string(data.size()) +
                                        " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    }

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool square() const { return rows == cols; }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    bool operator==(const DenseMatrix& o) const {
        return rows == o.rows && cols == o.cols && data == o.data;
    }
};

inline Vec matvec(const DenseMatrix& m, const Vec& x) {
    if (m.cols != x.size())
        throw std::invalid_argument("matvec: dimension mismatch (" + std::to_string(m.cols) +
                                    " cols vs vector of " + std::to_string(x.size()) + ")");
    Vec r(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

inline DenseMatrix transpose(const DenseMatrix& m) {
    DenseMatrix t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

inline DenseMatrix symmetric_part(const DenseMatrix& m) {
    if (!m.square()) throw std::invalid_argument("symmetric_part: matrix must be square");
    DenseMatrix s(m.rows, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.rows; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
    return s;
}

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
    DenseMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
// Converges to relative off-diagonal mass below tol; quadratic near the end,
// so the sweep cap is generous for any n we handle.
inline std::vector<double> sym_eigenvalues(DenseMatrix s, double rel_tol = 1e-14, int max_sweeps = 100) {
    if (!s.square()) throw std::invalid_argument("sym_eigenvalues: matrix must be square");
    const std::size_t n = s.rows;
    if (n == 0) return {};
    if (n == 1) return {s(0, 0)};

    double fro = 0.0;
    for (double v : s.data) fro += v * v;
    fro = std::sqrt(fro);
    const double stop = rel_tol * (fro > 0 ? fro : 1.0);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * s(i, j) * s(i, j);
        if (std::sqrt(off) <= stop) break;

        for (std::size_t p = 0; p < n - 1; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double app = s(p, p), aqq = s(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = s(i, i);
    return ev;
}

// Smallest eigenvalue of (M + M^T)/2.
inline double lambda_min_sym(const DenseMatrix& m) {
    const auto ev = sym_eigenvalues(symmetric_part(m));
    double lo = ev[0];
    for (double e : ev) lo = std::min(lo, e);
    return lo;
}

// Largest singular value of M, via the spectrum of M^T M.
inline double sigma_max(const DenseMatrix& m) {
    DenseMatrix g = matmul(transpose(m), m);
    // enforce exact symmetry lost to rounding
    for (std::size_t i = 0; i < g.rows; ++i)
        for (std::size_t j = i + 1; j < g.cols; ++j) {
            const double v = 0.5 * (g(i, j) + g(j, i));
            g(i, j) = v;
            g(j, i) = v;
        }
    const auto ev = sym_eigenvalues(g);
    double hi = 0.0;
    for (double e : ev) hi = std::max(hi, e);
    return std::sqrt(std::max(0.0, hi));
}

}  // namespace qvi
