// Cyclic Jacobi eigensolver for small dense symmetric matrices. Used to
// evaluate the extremal Rayleigh quotients behind the restricted isometry
// constants; no external linear algebra dependency.
#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/matrix.hpp"

namespace sparsedecomp {

struct JacobiOptions {
    double tol = 1e-12;        // stop when off-diagonal mass < tol * ||A||_F
    int max_sweeps = 100;
    std::size_t max_dim = 64;
    bool want_vectors = false;
};

struct SymEigenResult {
    std::vector<double> values;  // unsorted (diagonal order after convergence)
    Matrix vectors;              // column j is the eigenvector for values[j]
    int sweeps = 0;
};

namespace detail {

inline double off_diagonal_mass(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

inline void check_symmetric(const Matrix& a) {
    if (a.rows() != a.cols())
        throw PreconditionViolated("jacobi_eigen: matrix must be square");
    double scale = 0.0;
    for (double x : a.data()) scale = std::max(scale, std::fabs(x));
    const double tol = 1e-10 * std::max(1.0, scale);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::fabs(a(i, j) - a(j, i)) > tol)
                throw PreconditionViolated("jacobi_eigen: matrix is not symmetric");
}

}  // namespace detail

inline SymEigenResult jacobi_eigen(const Matrix& input, const JacobiOptions& opts = {}) {
    detail::check_symmetric(input);
    const std::size_t n = input.rows();
    if (n > opts.max_dim)
        throw PreconditionViolated("jacobi_eigen: dimension exceeds configured max");

    Matrix a = input;
    // Symmetrize away roundoff-level asymmetry so rotations stay exact.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double m = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = m;
            a(j, i) = m;
        }

    SymEigenResult result;
    result.vectors = opts.want_vectors ? Matrix::identity(n) : Matrix();

    double frob = 0.0;
    for (double x : a.data()) frob += x * x;
    frob = std::sqrt(frob);
    const double threshold = opts.tol * frob;

    int sweep = 0;
    while (detail::off_diagonal_mass(a) > threshold) {
        if (sweep++ >= opts.max_sweeps)
            throw NoConvergence("jacobi_eigen: no convergence after max sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(p, i) = a(i, p);
                    a(i, q) = s * aip + c * aiq;
                    a(q, i) = a(i, q);
                }
                if (opts.want_vectors) {
                    for (std::size_t i = 0; i < n; ++i) {
                        const double vip = result.vectors(i, p), viq = result.vectors(i, q);
                        result.vectors(i, p) = c * vip - s * viq;
                        result.vectors(i, q) = s * vip + c * viq;
                    }
                }
            }
        }
    }

    result.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.values[i] = a(i, i);
    result.sweeps = sweep;
    return result;
}

// Extreme eigenvalues of a symmetric matrix.
inline std::pair<double, double> sym_eigen_extremes(const Matrix& a, double tol = 1e-12) {
    JacobiOptions opts;
    opts.tol = tol;
    const SymEigenResult r = jacobi_eigen(a, opts);
    const auto [lo, hi] = std::minmax_element(r.values.begin(), r.values.end());
    return {*lo, *hi};
}

// Eigenpair attaining the eigenvalue of largest |lambda - 1|; used for
// witness-tightness diagnostics on Gram matrices.
inline std::pair<double, Vector> extremal_gram_eigenpair(const Matrix& a) {
    JacobiOptions opts;
    opts.want_vectors = true;
    const SymEigenResult r = jacobi_eigen(a, opts);
    std::size_t best = 0;
    for (std::size_t i = 1; i < r.values.size(); ++i)
        if (std::fabs(r.values[i] - 1.0) > std::fabs(r.values[best] - 1.0)) best = i;
    return {r.values[best], r.vectors.column(best)};
}

}  // namespace sparsedecomp
