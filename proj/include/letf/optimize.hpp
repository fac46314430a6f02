#pragma once

// Unconstrained quasi-Newton minimization. Constraints are handled by the
// caller through smooth reparameterization.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace letf::opt {

/// Returns f(x) and writes the gradient into `grad`. Non-finite values are
/// treated as infeasible and shrink the line-search step.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct BfgsOptions {
    std::size_t max_iter = 500;
    double grad_tol = 1e-6;    ///< stop when max|g| <= grad_tol * max(1, |f|)
    std::size_t max_backtracks = 60;
};

struct BfgsResult {
    std::vector<double> x;
    double f = 0.0;
    double grad_norm = 0.0;  ///< max-norm of the final gradient
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
    std::string message;
};

/// BFGS with an Armijo backtracking line search and inverse-Hessian updates
/// skipped when the curvature condition fails.
BfgsResult minimize_bfgs(const Objective& f, std::vector<double> x0, const BfgsOptions& opts = {});

}  // namespace letf::opt
