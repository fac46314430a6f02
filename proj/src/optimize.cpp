#include "letf/optimize.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace letf::opt {
namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

BfgsResult minimize_bfgs(const Objective& objective, std::vector<double> x0, const BfgsOptions& opts) {
    const auto n = static_cast<Eigen::Index>(x0.size());
    BfgsResult res;
    Vec x = Eigen::Map<Vec>(x0.data(), n);
    Vec g(n), g_new(n), x_new(n);

    auto eval = [&](const Vec& at, Vec& grad) {
        ++res.evaluations;
        const double v = objective(std::span<const double>(at.data(), at.size()),
                                   std::span<double>(grad.data(), grad.size()));
        return std::isfinite(v) && grad.allFinite() ? v : INFINITY;
    };

    double f = eval(x, g);
    if (!std::isfinite(f)) {
        res.x = x0;
        res.f = f;
        res.message = "objective not finite at the initial point";
        return res;
    }
    Mat H = Mat::Identity(n, n);
    bool fresh = true;  // H was just reset

    for (res.iterations = 0; res.iterations < opts.max_iter; ++res.iterations) {
        if (max_abs(g) <= opts.grad_tol * std::max(1.0, std::abs(f))) {
            res.converged = true;
            res.message = "gradient tolerance reached";
            break;
        }
        Vec d = -H * g;
        double slope = g.dot(d);
        if (!(slope < 0.0)) {
            H.setIdentity();
            fresh = true;
            d = -g;
            slope = -g.squaredNorm();
        }
        // First step on a reset metric is scaled so the move is modest.
        double step = fresh ? std::min(1.0, 1.0 / std::max(1e-12, max_abs(g))) : 1.0;
        double f_new = INFINITY;
        bool accepted = false;
        for (std::size_t k = 0; k < opts.max_backtracks; ++k) {
            x_new = x + step * d;
            f_new = eval(x_new, g_new);
            if (f_new <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (fresh) {
                res.message = "line search failed";
                break;
            }
            H.setIdentity();
            fresh = true;
            continue;
        }
        const Vec s = x_new - x;
        const Vec y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (fresh) H *= sy / y.squaredNorm();
            const double rho = 1.0 / sy;
            const Vec Hy = H * y;
            H += ((sy + y.dot(Hy)) * rho * rho) * (s * s.transpose()) -
                 rho * (Hy * s.transpose() + s * Hy.transpose());
            fresh = false;
        }
        x = x_new;
        g = g_new;
        f = f_new;
    }
    if (res.iterations == opts.max_iter && !res.converged) res.message = "iteration limit reached";
    res.x.assign(x.data(), x.data() + n);
    res.f = f;
    res.grad_norm = max_abs(g);
    if (!res.converged && res.grad_norm <= opts.grad_tol * std::max(1.0, std::abs(f))) {
        res.converged = true;
        res.message = "gradient tolerance reached";
    }
    return res;
}

}  // namespace letf::opt
