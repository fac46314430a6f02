#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace letf::sim {

/// Trading days per year; maps annualized grids to per-period parameters.
inline constexpr double kTradingDays = 252.0;

/// Gaussian i.i.d. returns, per-period mean and standard deviation.
struct IIDParams {
    double mu = 0.0;
    double sigma = 0.01;
};

/// x_t = intercept + phi * x_{t-1} + eps_t, eps_t ~ N(0, sigma_eps^2).
struct AR1Params {
    double phi = 0.0;
    double sigma_eps = 0.01;
    double intercept = 0.0;

    double stationary_mean() const { return intercept / (1.0 - phi); }
    double stationary_variance() const { return sigma_eps * sigma_eps / (1.0 - phi * phi); }
};

/// AR(1)-GARCH(1,1):
///   x_t = mu + phi * x_{t-1} + eps_t,  eps_t = sigma_t z_t,
///   sigma_t^2 = omega + alpha * eps_{t-1}^2 + beta_g * sigma_{t-1}^2.
/// Parameters are in percent units (omega in percent^2), matching the
/// magnitudes reported for daily equity ETF returns; simulated paths are
/// converted to decimal before compounding.
struct ArGarchParams {
    double mu = 0.0;
    double phi = 0.0;
    double omega = 0.0;
    double alpha = 0.0;
    double beta_g = 0.0;

    double persistence() const { return alpha + beta_g; }
    double unconditional_variance() const { return omega / (1.0 - alpha - beta_g); }
};

/// Regime-switching GBM: drift and volatility per regime (per unit time),
/// continuous-time Markov chain generator, initial distribution.
struct RegimeModel {
    std::vector<double> mu;
    std::vector<double> sigma;
    std::vector<double> generator;  ///< row-major M x M rate matrix
    std::vector<double> initial;

    std::size_t size() const { return mu.size(); }
    double rate(std::size_t i, std::size_t j) const { return generator[i * size() + j]; }
};

using ModelParams = std::variant<IIDParams, AR1Params, ArGarchParams, RegimeModel>;

void validate(const IIDParams& p);
void validate(const AR1Params& p);
void validate(const ArGarchParams& p);
void validate(const RegimeModel& m);
void validate(const ModelParams& m);

std::string model_tag(const ModelParams& m);

/// Unit convention note carried by every simulated artifact.
std::string scale_note(const ModelParams& m);

/// Simulated simple returns, one row per path (decimal units).
struct PathBatch {
    std::size_t n_paths = 0;
    std::size_t n_steps = 0;
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::string model_tag;
    std::string scale_note;

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values).subspan(i * n_steps, n_steps);
    }
};

}  // namespace letf::sim
