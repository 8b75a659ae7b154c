// Dense real matrices, row-major storage. Columns are the unit of
// extraction: RIP constants are defined over column submatrices.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/vector.hpp"

namespace sparsedecomp {

class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
        if (rows == 0 || cols == 0)
            throw PreconditionViolated("Matrix: dimensions must be >= 1");
    }

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows == 0 || cols == 0)
            throw PreconditionViolated("Matrix: dimensions must be >= 1");
        if (data_.size() != rows * cols)
            throw DimensionMismatch("Matrix: data size does not match rows*cols");
        for (double x : data_)
            if (!std::isfinite(x))
                throw PreconditionViolated("Matrix: entries must be finite");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    const std::vector<double>& data() const { return data_; }

    Vector column(std::size_t c) const {
        std::vector<double> col(rows_);
        for (std::size_t r = 0; r < rows_; ++r) col[r] = (*this)(r, c);
        return Vector(std::move(col));
    }

    Vector multiply(const Vector& x) const {
        if (x.size() != cols_)
            throw DimensionMismatch("Matrix::multiply: dimension mismatch");
        std::vector<double> y(rows_, 0.0);
        for (std::size_t r = 0; r < rows_; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c) * x[c];
            y[r] = s;
        }
        return Vector(std::move(y));
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// Gram matrix of the columns indexed by `support`: G[a][b] = <phi_a, phi_b>.
inline Matrix gram_submatrix(const Matrix& phi, const SupportSet& support) {
    const std::size_t k = support.size();
    Matrix g(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < phi.rows(); ++r)
                s += phi(r, support.indices[a]) * phi(r, support.indices[b]);
            g(a, b) = s;
            g(b, a) = s;
        }
    }
    return g;
}

// Cross-Gram of two column subsets: X[a][b] = <phi_{T[a]}, phi_{T'[b]}>.
inline Matrix cross_gram(const Matrix& phi, const SupportSet& t, const SupportSet& t_prime) {
    Matrix x(t.size(), t_prime.size());
    for (std::size_t a = 0; a < t.size(); ++a)
        for (std::size_t b = 0; b < t_prime.size(); ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < phi.rows(); ++r)
                s += phi(r, t.indices[a]) * phi(r, t_prime.indices[b]);
            x(a, b) = s;
        }
    return x;
}

}  // namespace sparsedecomp
