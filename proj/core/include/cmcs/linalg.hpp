#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cmcs {

using Vector = std::vector<double>;

// Dense row-major matrix, just big enough for quasi-Newton state and
// normal-equation solves. Not a general linear algebra library.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
Vector matvec(const Matrix& m, std::span<const double> v);

// a += c * u * v^T
void add_scaled_outer(Matrix& a, double c, std::span<const double> u, std::span<const double> v);

// Solves a x = b by Gaussian elimination with partial pivoting.
// Throws ErrorKind::RankDeficient when a pivot collapses.
Vector solve_linear(Matrix a, Vector b);

// Least squares via normal equations; falls back to a small ridge term when
// the Gram matrix is numerically singular (collinear design columns).
Vector solve_least_squares(const std::vector<Vector>& rows, std::span<const double> rhs,
                           std::size_t n_coeffs);

}  // namespace cmcs
