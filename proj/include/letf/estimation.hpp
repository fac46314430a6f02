#pragma once

// Least-squares AR(1) and conditional Gaussian maximum likelihood for
// AR(1)-GARCH(1,1).

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "letf/core.hpp"
#include "letf/sim/models.hpp"

namespace letf::est {

/// Units in which a model is estimated. Input series are always decimal;
/// Percent multiplies them by 100 first.
enum class ReturnScale { Decimal, Percent };

const char* to_string(ReturnScale s);
double scale_factor(ReturnScale s);

struct Ar1Fit {
    sim::AR1Params params;  ///< phi, residual std, intercept
    double phi_se = 0.0;
    double intercept_se = 0.0;
    std::size_t n_obs = 0;  ///< regression observations (series length - 1)
};

/// OLS of X_t on (1, X_{t-1}). Requires at least 30 observations; throws
/// "constant-series" when the lagged regressor has no variance.
Ar1Fit estimate_ar1(std::span<const double> x);

struct GarchFiltered {
    std::vector<double> residuals;  ///< eps_t = x_t - mu - phi x_{t-1}, t = 1..n-1
    std::vector<double> variances;  ///< sigma_t^2 aligned with residuals
};

/// Variance recursion over the AR residuals. The pre-sample variance and
/// squared shock are both set to the mean squared residual, so
/// sigma_1^2 = omega + (alpha + beta) s^2 and every sigma_t^2 >= omega.
GarchFiltered garch_filter(const sim::ArGarchParams& params, std::span<const double> x);

/// 0.5 * sum_t [log(2 pi sigma_t^2) + eps_t^2 / sigma_t^2] over t = 1..n-1,
/// conditioning on the first observation. Throws "numerical-overflow".
double garch_neg_loglik(const sim::ArGarchParams& params, std::span<const double> x);

/// Same objective with its analytic gradient with respect to
/// (mu, phi, omega, alpha, beta_g). Parameters are not validated, so this may
/// be evaluated slightly outside the admissible set (finite differences).
/// Returns +inf instead of throwing when the recursion breaks down.
double garch_nll_gradient(const sim::ArGarchParams& params, std::span<const double> x,
                          std::array<double, 5>& grad);

/// Documented warm start: mu = sample mean, phi = lag-1 autocorrelation,
/// alpha = 0.1, beta_g = 0.8, omega = (1 - alpha - beta_g) * var(AR residuals).
sim::ArGarchParams garch_initial_point(std::span<const double> x);

struct GarchFitOptions {
    ReturnScale scale = ReturnScale::Percent;
    std::size_t max_iter = 500;
    double grad_tol = 1e-6;
    std::optional<sim::ArGarchParams> start;
};

struct GarchFit {
    sim::ArGarchParams params;
    std::array<double, 5> std_errors{};  ///< mu, phi, omega, alpha, beta_g
    double loglik = 0.0;                 ///< maximized log-likelihood (negated NLL)
    double start_nll = 0.0;
    bool converged = false;
    std::size_t n_obs = 0;  ///< observations contributing to the likelihood
    std::size_t iterations = 0;
    ReturnScale scale = ReturnScale::Percent;
    std::string message;
};

inline constexpr std::array<const char*, 5> kGarchParamNames{"mu", "phi", "omega", "alpha", "beta"};

/// Maximum likelihood over omega > 0, alpha, beta_g >= 0,
/// alpha + beta_g <= 1 - 1e-6, |phi| < 1, enforced by reparameterization.
/// Standard errors come from the inverse of a central-difference Hessian of
/// the analytic gradient; a Hessian that is not positive definite sets
/// converged = false. Optimizer failure is reported, not thrown.
GarchFit fit_ar1_garch_scaled(std::span<const double> x, const GarchFitOptions& opts = {});

/// Converts the decimal series to opts.scale units and fits.
GarchFit fit_ar1_garch(const ReturnSeries& series, const GarchFitOptions& opts = {});

/// AR(1) coefficient on every window of `window` consecutive returns
/// (stride 1), stamped at the window end.
std::vector<RollingPoint> rolling_ar1(const ReturnSeries& series, std::size_t window);

}  // namespace letf::est
