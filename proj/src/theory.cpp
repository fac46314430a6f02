#include "letf/theory.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "letf/error.hpp"

namespace letf::theory {
namespace {

void require_beta(int beta) {
    if (beta == 0) throw_config("invalid-leverage", "leverage ratio must be nonzero");
}

double binom2(std::size_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - 1); }

}  // namespace

double expected_ce_iid_with_fee(double mu, int beta, double fee, std::size_t n) {
    require_beta(beta);
    if (n < 1) throw_config("invalid-horizon", "horizon must be >= 1");
    const double lev_mean = beta * mu - fee;
    if (!(lev_mean > -1.0) || !(mu > -1.0))
        throw_config("collapse-regime", "mean leveraged return <= -100% (beta*mu = " +
                                            std::to_string(beta * mu) + ")");
    const double nn = static_cast<double>(n);
    return std::expm1(nn * std::log1p(lev_mean)) - beta * std::expm1(nn * std::log1p(mu));
}

double expected_ce_iid(double mu, int beta, std::size_t n) {
    const double v = expected_ce_iid_with_fee(mu, beta, 0.0, n);
    assert(beta == 1 || v >= -1e-12);
    return v;
}

double expected_ce_iid_blocked(double mu, int beta, double fee_daily, std::size_t n_days,
                               std::size_t block) {
    if (block < 1 || n_days < block) throw_config("invalid-block", "need 1 <= block <= n");
    const double block_mean = std::expm1(static_cast<double>(block) * std::log1p(mu));
    return expected_ce_iid_with_fee(block_mean, beta, static_cast<double>(block) * fee_daily,
                                    n_days / block);
}

double expected_ce_autocorr(const AutocovSpec& spec, int beta, double fee, std::size_t n) {
    require_beta(beta);
    if (n < 1) throw_config("invalid-horizon", "horizon must be >= 1");
    if (spec.gammas.size() + 1 < n)
        throw_config("insufficient-gammas", "need gamma_k up to lag " + std::to_string(n - 1));
    long double weighted = 0.0L;
    for (std::size_t k = 1; k < n; ++k)
        weighted += static_cast<long double>(n - k) * static_cast<long double>(spec.gammas[k - 1]);
    const double b = static_cast<double>(beta);
    const double pairs = binom2(n);
    return -static_cast<double>(n) * fee + b * (b - 1.0) * static_cast<double>(weighted) -
           2.0 * b * fee * spec.mu * pairs + pairs * fee * fee;
}

std::vector<double> ar1_gammas(const sim::AR1Params& params, std::size_t max_lag) {
    sim::validate(params);
    if (params.intercept != 0.0)
        throw_config("zero-mean-only", "lag moments implemented for zero-intercept AR(1)");
    const long double var = static_cast<long double>(params.stationary_variance());
    std::vector<double> g(max_lag);
    long double power = 1.0L;
    for (std::size_t k = 0; k < max_lag; ++k) {
        power *= params.phi;
        g[k] = static_cast<double>(var * power);
    }
    return g;
}

double q_factor(double phi, std::size_t n) {
    if (n < 2) throw_config("invalid-horizon", "Q factor needs n >= 2");
    if (!(std::abs(phi) < 1.0)) throw_config("invalid-params", "Q factor needs |phi| < 1");
    long double q = 0.0L, power = 1.0L;
    for (std::size_t k = 1; k < n; ++k) {
        q += static_cast<long double>(n - k) * power;
        power *= phi;
    }
    assert(q > 0.0L);
    return static_cast<double>(q);
}

double expected_ce_ar1_approx(const sim::AR1Params& params, int beta, std::size_t n) {
    sim::validate(params);
    if (beta == 0 || beta == 1)
        throw_config("invalid-leverage", "AR(1) approximation needs beta outside {0, 1}");
    if (n < 2) return 0.0;
    const double b = static_cast<double>(beta);
    return b * (b - 1.0) * params.stationary_variance() * params.phi * q_factor(params.phi, n);
}

double phi_kernel(double mu, int beta, double fee, double t) {
    return std::exp((beta * mu - fee) * t) - beta * std::exp(mu * t);
}

RegimeMix normalized(RegimeMix mix) {
    if (mix.pis.size() != mix.mus.size() || mix.pis.empty())
        throw_config("invalid-occupation", "occupation and drift vectors must match and be nonempty");
    double total = 0.0;
    for (double p : mix.pis) {
        if (!(p >= 0.0)) throw_config("invalid-occupation", "occupation entries must be >= 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw_config("invalid-occupation", "occupation vector sums to " + std::to_string(total));
    for (double& p : mix.pis) p /= total;
    return mix;
}

std::vector<double> expected_occupation(const sim::RegimeModel& model, double t) {
    sim::validate(model);
    if (!(t >= 0.0) || !std::isfinite(t)) throw_config("invalid-horizon", "horizon must be finite and >= 0");
    const std::size_t m = model.size();
    if (t == 0.0) return model.initial;
    // exp(t [[Q, I], [0, 0]]) carries int_0^t exp(Q s) ds in its upper-right block.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) a(i, j) = model.rate(i, j) * t;
        a(i, m + i) = t;
    }
    const Eigen::MatrixXd e = a.exp();
    std::vector<double> pi(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) pi[j] += model.initial[i] * e(i, m + j);
        pi[j] = std::max(0.0, pi[j] / t);
    }
    return pi;
}

double expected_ce_regime(const RegimeMix& raw) {
    require_beta(raw.beta);
    const RegimeMix mix = normalized(raw);
    // With sum(pi) = 1, sum pi_j Phi_j + (beta - 1) equals
    // sum pi_j [expm1((beta mu_j - f) t) - beta expm1(mu_j t)], which avoids
    // cancelling O(1) terms.
    const double b = static_cast<double>(mix.beta);
    double acc = 0.0;
    for (std::size_t j = 0; j < mix.pis.size(); ++j)
        acc += mix.pis[j] *
               (std::expm1((b * mix.mus[j] - mix.fee) * mix.t) - b * std::expm1(mix.mus[j] * mix.t));
    return acc;
}

const char* to_string(CESign s) {
    switch (s) {
        case CESign::Positive: return "positive";
        case CESign::Negative: return "negative";
        case CESign::Zero: return "zero";
    }
    return "?";
}

CESign ce_sign_regime(const RegimeMix& mix, double eps) {
    const double margin = expected_ce_regime(mix);
    if (margin > eps) return CESign::Positive;
    if (margin < -eps) return CESign::Negative;
    return CESign::Zero;
}

double ce_single_regime(double mu, int beta, double t) {
    if (beta == 0 || beta == 1)
        throw_config("invalid-leverage", "single-regime result needs beta outside {0, 1}");
    const double b = static_cast<double>(beta);
    const double v = std::expm1(b * mu * t) - b * std::expm1(mu * t);
    assert(v >= -1e-12);
    return v;
}

}  // namespace letf::theory
