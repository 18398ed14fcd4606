#include "cmcs/bfgs.hpp"

#include <cmath>

#include "cmcs/errors.hpp"

namespace cmcs {
namespace {

bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

Matrix inv_hessian_update(const Matrix& inv_hessian, const Vector& zeta, const Vector& psi,
                          double curvature_epsilon, std::size_t* skip_count) {
    const std::size_t n = zeta.size();
    const double curvature = dot(zeta, psi);
    if (std::abs(curvature) < curvature_epsilon) {
        if (skip_count) ++(*skip_count);
        return inv_hessian;
    }

    const Vector h_psi = matvec(inv_hessian, psi);
    const double psi_h_psi = dot(psi, h_psi);

    Matrix out = inv_hessian;
    const double c1 = (curvature + psi_h_psi) / (curvature * curvature);
    // out += c1 * zeta zeta^T - (h_psi zeta^T + zeta h_psi^T) / curvature,
    // written entrywise so symmetry is exact in floating point.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) += c1 * (zeta[i] * zeta[j]) -
                         (h_psi[i] * zeta[j] + zeta[i] * h_psi[j]) / curvature;
        }
    }
    return out;
}

Vector finite_difference_gradient(const Objective& objective, const Vector& point, double step) {
    Vector grad(point.size(), 0.0);
    Vector probe = point;
    for (std::size_t i = 0; i < point.size(); ++i) {
        const double h = step * (1.0 + std::abs(point[i]));
        probe[i] = point[i] + h;
        const double fp = objective(probe);
        probe[i] = point[i] - h;
        const double fm = objective(probe);
        probe[i] = point[i];
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

double gradient_check(const Objective& objective, const GradientFn& gradient, const Vector& point,
                      double step) {
    const Vector analytic = gradient(point);
    const Vector numeric = finite_difference_gradient(objective, point, step);
    double worst = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        const double scale = std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1.0});
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
    }
    return worst;
}

BfgsResult bfgs_minimize(const Objective& objective, const std::optional<GradientFn>& gradient,
                         Vector initial, const BfgsOptions& options) {
    if (!all_finite(initial))
        raise(ErrorKind::Config, "bfgs_minimize: initial point not finite");

    auto eval_gradient = [&](const Vector& p) {
        return gradient ? (*gradient)(p) : finite_difference_gradient(objective, p, options.fd_step);
    };

    const std::size_t n = initial.size();
    BfgsResult result;
    result.minimizer = std::move(initial);
    result.value = objective(result.minimizer);
    if (!std::isfinite(result.value))
        raise(ErrorKind::Config, "bfgs_minimize: objective not finite at initial point");
    result.trace.push_back(result.value);

    Vector grad = eval_gradient(result.minimizer);
    if (!all_finite(grad)) {
        result.status = BfgsStatus::Diverged;
        return result;
    }

    Matrix inv_hessian = Matrix::identity(n);

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        result.iterations = it;
        result.gradient_norm = norm2(grad);
        if (result.gradient_norm <= options.gradient_tolerance) {
            result.status = BfgsStatus::Converged;
            return result;
        }

        Vector direction = matvec(inv_hessian, grad);
        for (double& d : direction) d = -d;
        double slope = dot(grad, direction);
        if (!(slope < 0.0)) {
            // Lost positive definiteness; restart from steepest descent.
            inv_hessian = Matrix::identity(n);
            direction = grad;
            for (double& d : direction) d = -d;
            slope = dot(grad, direction);
        }

        // Backtracking line search, S > 0 with Armijo sufficient decrease.
        double step = 1.0;
        Vector candidate(n);
        double candidate_value = 0.0;
        bool accepted = false;
        for (std::size_t ls = 0; ls < options.max_backtracks; ++ls) {
            for (std::size_t i = 0; i < n; ++i)
                candidate[i] = result.minimizer[i] + step * direction[i];
            candidate_value = objective(candidate);
            if (std::isfinite(candidate_value) &&
                candidate_value <= result.value + options.armijo_c1 * step * slope) {
                accepted = true;
                break;
            }
            step *= options.backtrack_factor;
        }
        if (!accepted) {
            result.status = BfgsStatus::Stalled;
            return result;
        }

        Vector new_grad = eval_gradient(candidate);
        if (!all_finite(new_grad) || !std::isfinite(candidate_value)) {
            result.status = BfgsStatus::Diverged;
            return result;
        }

        Vector zeta(n), psi(n);
        for (std::size_t i = 0; i < n; ++i) {
            zeta[i] = candidate[i] - result.minimizer[i];
            psi[i] = new_grad[i] - grad[i];
        }
        inv_hessian = inv_hessian_update(inv_hessian, zeta, psi, options.curvature_epsilon,
                                         &result.skipped_updates);

        result.minimizer = std::move(candidate);
        result.value = candidate_value;
        result.trace.push_back(result.value);
        grad = std::move(new_grad);
    }

    result.iterations = options.max_iterations;
    result.gradient_norm = norm2(grad);
    result.status = BfgsStatus::MaxIterations;
    return result;
}

}  // namespace cmcs
