#include "cmcs/linalg.hpp"

#include <cmath>
#include <cstdlib>

#include "cmcs/errors.hpp"

namespace cmcs {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Vector matvec(const Matrix& m, std::span<const double> v) {
    Vector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

void add_scaled_outer(Matrix& a, double c, std::span<const double> u, std::span<const double> v) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += c * u[i] * v[j];
}

Vector solve_linear(Matrix a, Vector b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
        raise(ErrorKind::Config, "solve_linear: non-square system");

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                pivot = r;
            }
        }
        if (best < 1e-13)
            raise(ErrorKind::RankDeficient, "solve_linear: singular matrix");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }

    Vector x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

Vector solve_least_squares(const std::vector<Vector>& rows, std::span<const double> rhs,
                           std::size_t n_coeffs) {
    Matrix gram(n_coeffs, n_coeffs);
    Vector moment(n_coeffs, 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Vector& x = rows[r];
        for (std::size_t i = 0; i < n_coeffs; ++i) {
            moment[i] += x[i] * rhs[r];
            for (std::size_t j = 0; j < n_coeffs; ++j) gram(i, j) += x[i] * x[j];
        }
    }
    try {
        return solve_linear(gram, moment);
    } catch (const Error&) {
        double trace = 0.0;
        for (std::size_t i = 0; i < n_coeffs; ++i) trace += gram(i, i);
        const double ridge = 1e-10 * (trace > 0 ? trace : 1.0);
        for (std::size_t i = 0; i < n_coeffs; ++i) gram(i, i) += ridge;
        return solve_linear(gram, moment);
    }
}

}  // namespace cmcs
