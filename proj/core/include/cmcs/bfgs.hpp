#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "cmcs/linalg.hpp"

namespace cmcs {

using Objective = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;

struct BfgsOptions {
    std::size_t max_iterations = 200;
    double gradient_tolerance = 1e-8;
    double armijo_c1 = 1e-4;        // sufficient-decrease slope factor
    double backtrack_factor = 0.5;  // step halving
    std::size_t max_backtracks = 60;
    double curvature_epsilon = 1e-12;  // skip the update when |zeta.psi| falls below
    double fd_step = 1e-6;             // central-difference step for the fallback gradient
};

enum class BfgsStatus { Converged, MaxIterations, Stalled, Diverged };

struct BfgsResult {
    Vector minimizer;
    double value = 0.0;
    BfgsStatus status = BfgsStatus::MaxIterations;
    std::size_t iterations = 0;
    std::vector<double> trace;  // objective at each accepted point, monotone non-increasing
    std::size_t skipped_updates = 0;
    double gradient_norm = 0.0;
};

/// Rank-two update of the inverse Hessian from the parameter step `zeta` and
/// gradient difference `psi`. Keeps the matrix symmetric and enforces the
/// secant condition result * psi == zeta. When |zeta.psi| < epsilon the
/// update is skipped and the matrix returned unchanged (skip counted if a
/// counter is supplied).
Matrix inv_hessian_update(const Matrix& inv_hessian, const Vector& zeta, const Vector& psi,
                          double curvature_epsilon = 1e-12, std::size_t* skip_count = nullptr);

Vector finite_difference_gradient(const Objective& objective, const Vector& point, double step);

/// Largest relative deviation between the analytic gradient and central
/// finite differences at `point`.
double gradient_check(const Objective& objective, const GradientFn& gradient, const Vector& point,
                      double step = 1e-6);

/// Quasi-Newton minimization with backtracking Armijo line search. The
/// inverse Hessian starts at identity and is maintained by rank-two updates
/// only; no matrix is ever inverted. A missing gradient falls back to
/// central finite differences.
BfgsResult bfgs_minimize(const Objective& objective, const std::optional<GradientFn>& gradient,
                         Vector initial, const BfgsOptions& options = {});

}  // namespace cmcs
