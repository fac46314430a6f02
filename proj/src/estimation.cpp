#include "letf/estimation.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "letf/error.hpp"
#include "letf/optimize.hpp"
#include "letf/stats.hpp"

namespace letf::est {
namespace {

constexpr double kBudget = 1.0 - 1e-6;
constexpr std::size_t kMinAr1 = 30;

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Smooth map from R^5 onto the admissible parameter set.
struct Transform {
    static sim::ArGarchParams to_params(std::span<const double> u) {
        const double total = kBudget * logistic(u[3]);
        const double share = logistic(u[4]);
        return {u[0], std::tanh(u[1]), std::exp(u[2]), total * share, total * (1.0 - share)};
    }

    static std::array<double, 5> from_params(const sim::ArGarchParams& p) {
        const double total = std::clamp(p.alpha + p.beta_g, 1e-6, kBudget * (1.0 - 1e-9));
        const double share = std::clamp(p.alpha / std::max(p.alpha + p.beta_g, 1e-300), 1e-6, 1.0 - 1e-6);
        return {p.mu, std::atanh(std::clamp(p.phi, -0.999, 0.999)), std::log(p.omega),
                logit(total / kBudget), logit(share)};
    }

    // d(natural)/d(u) applied to a natural-space gradient.
    static void chain(std::span<const double> u, const std::array<double, 5>& g, std::span<double> out) {
        const double phi = std::tanh(u[1]);
        const double s3 = logistic(u[3]), s4 = logistic(u[4]);
        const double total = kBudget * s3;
        const double dtotal = kBudget * s3 * (1.0 - s3);
        const double dshare = s4 * (1.0 - s4);
        out[0] = g[0];
        out[1] = g[1] * (1.0 - phi * phi);
        out[2] = g[2] * std::exp(u[2]);
        out[3] = (g[3] * s4 + g[4] * (1.0 - s4)) * dtotal;
        out[4] = (g[3] - g[4]) * total * dshare;
    }
};

double nll_impl(const sim::ArGarchParams& p, std::span<const double> x, std::array<double, 5>* grad,
                GarchFiltered* keep, std::ptrdiff_t* bad_index) {
    const std::size_t n = x.size();
    const std::size_t m = n - 1;
    std::vector<double> e(m);
    CompensatedSum s2_sum, de_mu, de_phi;
    for (std::size_t t = 1; t < n; ++t) {
        const double r = x[t] - p.mu - p.phi * x[t - 1];
        e[t - 1] = r;
        s2_sum.add(r * r);
        if (grad) {
            de_mu.add(-2.0 * r);
            de_phi.add(-2.0 * r * x[t - 1]);
        }
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    const double s2 = s2_sum.value() * inv_m;
    const double ds2_mu = de_mu.value() * inv_m, ds2_phi = de_phi.value() * inv_m;

    if (keep) {
        keep->residuals = e;
        keep->variances.resize(m);
    }
    // Derivatives of h with respect to (mu, phi, omega, alpha, beta).
    double h = 0.0;
    double dh[5] = {0, 0, 0, 0, 0};
    CompensatedSum total;
    double g_acc[5] = {0, 0, 0, 0, 0};
    for (std::size_t i = 0; i < m; ++i) {
        if (i == 0) {
            h = p.omega + (p.alpha + p.beta_g) * s2;
            if (grad) {
                dh[0] = (p.alpha + p.beta_g) * ds2_mu;
                dh[1] = (p.alpha + p.beta_g) * ds2_phi;
                dh[2] = 1.0;
                dh[3] = s2;
                dh[4] = s2;
            }
        } else {
            const double prev_e = e[i - 1];
            const double prev_h = h;
            h = p.omega + p.alpha * (prev_e * prev_e) + p.beta_g * prev_h;
            if (grad) {
                // x index of e[i-1] is i, so its lag regressor is x[i-1].
                dh[0] = p.alpha * 2.0 * prev_e * -1.0 + p.beta_g * dh[0];
                dh[1] = p.alpha * 2.0 * prev_e * -x[i - 1] + p.beta_g * dh[1];
                dh[2] = 1.0 + p.beta_g * dh[2];
                dh[3] = prev_e * prev_e + p.beta_g * dh[3];
                dh[4] = prev_h + p.beta_g * dh[4];
            }
        }
        const double et = e[i];
        const double term = std::log(2.0 * std::numbers::pi * h) + et * et / h;
        if (!std::isfinite(term) || !(h > 0.0)) {
            if (bad_index) *bad_index = static_cast<std::ptrdiff_t>(i + 1);
            return INFINITY;
        }
        total.add(term);
        if (keep) keep->variances[i] = h;
        if (grad) {
            const double a = 0.5 * (1.0 / h - et * et / (h * h));
            const double b = et / h;  // 0.5 * 2 e / h
            g_acc[0] += a * dh[0] - b;
            g_acc[1] += a * dh[1] - b * x[i];
            g_acc[2] += a * dh[2];
            g_acc[3] += a * dh[3];
            g_acc[4] += a * dh[4];
        }
    }
    if (grad)
        for (int k = 0; k < 5; ++k) (*grad)[k] = g_acc[k];
    return 0.5 * total.value();
}

void require_length(std::span<const double> x, std::size_t min, const char* what) {
    if (x.size() < min)
        throw_data("insufficient-data", std::string(what) + " needs at least " + std::to_string(min) +
                                            " observations, got " + std::to_string(x.size()));
    for (double v : x)
        if (!std::isfinite(v)) throw_data("non-finite", "series contains a non-finite value");
}

double lag1_autocorrelation(std::span<const double> x) {
    const double mean = sample_moments(x).mean;
    CompensatedSum num, den;
    for (std::size_t t = 0; t < x.size(); ++t) {
        den.add((x[t] - mean) * (x[t] - mean));
        if (t > 0) num.add((x[t] - mean) * (x[t - 1] - mean));
    }
    return den.value() > 0.0 ? num.value() / den.value() : 0.0;
}

}  // namespace

const char* to_string(ReturnScale s) { return s == ReturnScale::Percent ? "percent" : "decimal"; }
double scale_factor(ReturnScale s) { return s == ReturnScale::Percent ? 100.0 : 1.0; }

Ar1Fit estimate_ar1(std::span<const double> x) {
    require_length(x, kMinAr1, "AR(1) estimation");
    const std::size_t m = x.size() - 1;
    const auto lag = x.first(m), cur = x.subspan(1);
    const double mx = sample_moments(lag).mean, my = sample_moments(cur).mean;
    CompensatedSum sxx, sxy, raw;
    for (std::size_t t = 0; t < m; ++t) {
        sxx.add((lag[t] - mx) * (lag[t] - mx));
        sxy.add((lag[t] - mx) * (cur[t] - my));
        raw.add(lag[t] * lag[t]);
    }
    if (!(sxx.value() > 1e-20 * raw.value()) || sxx.value() == 0.0)
        throw_data("constant-series", "lagged returns have no variance");
    const double phi = sxy.value() / sxx.value();
    const double c = my - phi * mx;
    CompensatedSum rss;
    for (std::size_t t = 0; t < m; ++t) {
        const double r = cur[t] - c - phi * lag[t];
        rss.add(r * r);
    }
    const double s2 = rss.value() / static_cast<double>(m - 2);
    Ar1Fit fit;
    fit.params = {phi, std::sqrt(s2), c};
    fit.phi_se = std::sqrt(s2 / sxx.value());
    fit.intercept_se = std::sqrt(s2 * (1.0 / static_cast<double>(m) + mx * mx / sxx.value()));
    fit.n_obs = m;
    return fit;
}

GarchFiltered garch_filter(const sim::ArGarchParams& params, std::span<const double> x) {
    sim::validate(params);
    require_length(x, 2, "GARCH filtering");
    GarchFiltered out;
    std::ptrdiff_t bad = -1;
    if (!std::isfinite(nll_impl(params, x, nullptr, &out, &bad)))
        throw_numerical("numerical-overflow", "variance recursion broke down at index " + std::to_string(bad));
    return out;
}

double garch_neg_loglik(const sim::ArGarchParams& params, std::span<const double> x) {
    sim::validate(params);
    require_length(x, 2, "GARCH likelihood");
    std::ptrdiff_t bad = -1;
    const double v = nll_impl(params, x, nullptr, nullptr, &bad);
    if (!std::isfinite(v))
        throw_numerical("numerical-overflow", "non-finite likelihood term at index " + std::to_string(bad));
    return v;
}

double garch_nll_gradient(const sim::ArGarchParams& params, std::span<const double> x,
                          std::array<double, 5>& grad) {
    if (x.size() < 2) throw_data("insufficient-data", "GARCH likelihood needs two observations");
    return nll_impl(params, x, &grad, nullptr, nullptr);
}

sim::ArGarchParams garch_initial_point(std::span<const double> x) {
    require_length(x, 3, "GARCH initial point");
    sim::ArGarchParams p;
    p.mu = sample_moments(x).mean;
    p.phi = std::clamp(lag1_autocorrelation(x), -0.99, 0.99);
    p.alpha = 0.1;
    p.beta_g = 0.8;
    std::vector<double> e(x.size() - 1);
    for (std::size_t t = 1; t < x.size(); ++t) e[t - 1] = x[t] - p.mu - p.phi * x[t - 1];
    const double s = sample_moments(e).std;
    p.omega = (1.0 - p.alpha - p.beta_g) * s * s;
    if (!(p.omega > 0.0)) throw_data("constant-series", "AR residuals have no variance");
    return p;
}

GarchFit fit_ar1_garch_scaled(std::span<const double> x, const GarchFitOptions& opts) {
    require_length(x, 10, "GARCH fitting");
    const sim::ArGarchParams start = opts.start ? *opts.start : garch_initial_point(x);
    sim::validate(start);

    GarchFit fit;
    fit.scale = opts.scale;
    fit.n_obs = x.size() - 1;
    fit.start_nll = garch_neg_loglik(start, x);

    const opt::Objective objective = [&](std::span<const double> u, std::span<double> g) {
        std::array<double, 5> gp{};
        const double v = nll_impl(Transform::to_params(u), x, &gp, nullptr, nullptr);
        Transform::chain(u, gp, g);
        return v;
    };
    const auto u0 = Transform::from_params(start);
    const opt::BfgsResult r =
        opt::minimize_bfgs(objective, std::vector<double>(u0.begin(), u0.end()),
                           {opts.max_iter, opts.grad_tol, 60});
    fit.params = Transform::to_params(r.x);
    fit.iterations = r.iterations;
    fit.message = r.message;
    double nll = r.f;
    if (!(nll <= fit.start_nll)) {  // never report something worse than the warm start
        fit.params = start;
        nll = fit.start_nll;
    }
    fit.loglik = -nll;
    fit.converged = r.converged;

    // Central-difference Hessian of the analytic gradient in natural units.
    const std::array<double, 5> theta{fit.params.mu, fit.params.phi, fit.params.omega,
                                      fit.params.alpha, fit.params.beta_g};
    Eigen::Matrix<double, 5, 5> H;
    bool finite = true;
    for (int j = 0; j < 5; ++j) {
        const double h = 1e-4 * std::max(std::abs(theta[j]), 1e-2);
        std::array<double, 5> up = theta, dn = theta, gu{}, gd{};
        up[j] += h;
        dn[j] -= h;
        const auto as_params = [](const std::array<double, 5>& t) {
            return sim::ArGarchParams{t[0], t[1], t[2], t[3], t[4]};
        };
        const double fu = nll_impl(as_params(up), x, &gu, nullptr, nullptr);
        const double fd = nll_impl(as_params(dn), x, &gd, nullptr, nullptr);
        finite = finite && std::isfinite(fu) && std::isfinite(fd);
        for (int i = 0; i < 5; ++i) H(i, j) = (gu[i] - gd[i]) / (2.0 * h);
    }
    const Eigen::Matrix<double, 5, 5> Hs = 0.5 * (H + H.transpose());
    Eigen::LLT<Eigen::Matrix<double, 5, 5>> llt(Hs);
    if (!finite || llt.info() != Eigen::Success) {
        fit.converged = false;
        fit.std_errors.fill(NAN);
        fit.message += "; Hessian not positive definite";
        return fit;
    }
    const Eigen::Matrix<double, 5, 5> cov = llt.solve(Eigen::Matrix<double, 5, 5>::Identity());
    for (int i = 0; i < 5; ++i) fit.std_errors[i] = std::sqrt(cov(i, i));
    return fit;
}

GarchFit fit_ar1_garch(const ReturnSeries& series, const GarchFitOptions& opts) {
    const double k = scale_factor(opts.scale);
    std::vector<double> x(series.values().begin(), series.values().end());
    for (double& v : x) v *= k;
    return fit_ar1_garch_scaled(x, opts);
}

std::vector<RollingPoint> rolling_ar1(const ReturnSeries& series, std::size_t window) {
    if (window < kMinAr1) throw_config("invalid-window", "rolling AR(1) window must be >= 30");
    if (window > series.size())
        throw_config("window-too-large", "window " + std::to_string(window) + " exceeds series length " +
                                             std::to_string(series.size()));
    std::vector<RollingPoint> out(series.size() - window + 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t end = i + window - 1;
        out[i].end_index = end;
        if (series.has_dates()) out[i].date = series.dates()[end];
        out[i].value = estimate_ar1(series.values().subspan(i, window)).params.phi;
    }
    return out;
}

}  // namespace letf::est
