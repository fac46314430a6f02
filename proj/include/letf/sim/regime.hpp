#pragma once

// Regime-switching geometric Brownian motion driven by a continuous-time
// Markov chain, simulated exactly segment by segment.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "letf/core.hpp"
#include "letf/sim/models.hpp"
#include "letf/sim/parallel.hpp"
#include "letf/stats.hpp"

namespace letf::sim {

/// Piecewise-constant regime trajectory on [0, horizon]: state states[k]
/// holds on [times[k], times[k+1]) with the last segment ending at horizon.
struct RegimePath {
    std::vector<double> times;
    std::vector<std::size_t> states;
    double horizon = 0.0;

    std::size_t jumps() const { return states.empty() ? 0 : states.size() - 1; }
};

/// Exact simulation: the initial state is drawn from the initial
/// distribution, holding times are Exponential(-Q_ii), and the next state is
/// j != i with probability Q_ij / -Q_ii. Uses the Regime stream of `path`.
RegimePath simulate_markov_chain(const RegimeModel& model, double horizon, std::uint64_t seed,
                                 std::uint64_t path = 0);

/// Fraction of [0, horizon] spent in each state.
std::vector<double> occupation_fractions(const RegimePath& path, double horizon,
                                         std::size_t n_states);

/// Grid points per unit time used to emit discretized return series.
inline constexpr std::size_t kRegimeGridPerUnit = 252;

struct RegimeGbmBatch {
    std::vector<RegimePath> regimes;
    std::vector<double> growth;  ///< S_t / S_0 per path
    PathBatch grid_returns;      ///< simple returns of S between grid points
};

/// Benchmark prices under regime-switching GBM: on each constant-regime segment of
/// length d the log increment is N((mu_j - sigma_j^2 / 2) d, sigma_j^2 d).
RegimeGbmBatch simulate_regime_gbm(const RegimeModel& model, double horizon, std::size_t n_paths,
                                   std::uint64_t seed, std::size_t grid_per_unit = kRegimeGridPerUnit,
                                   const SimOptions& opts = {});

/// L_t / L_0 per path built from the same regime path and Brownian increments
/// as simulate_regime_gbm with the same seed, using the continuously
/// rebalanced exponent (beta mu - beta^2 sigma^2 / 2 - f) d + beta sigma dW.
/// Tracking noise is not modelled in continuous time.
std::vector<double> simulate_regime_letf(const RegimeModel& model, const LeverageSpec& spec,
                                         double horizon, std::size_t n_paths, std::uint64_t seed,
                                         std::size_t grid_per_unit = kRegimeGridPerUnit,
                                         const SimOptions& opts = {});

/// Simple returns of S on a uniform grid of n_steps intervals of length dt,
/// for path `path` (written to `out`, length n_steps).
void regime_grid_returns(const RegimeModel& model, std::size_t n_steps, double dt,
                         std::uint64_t seed, std::uint64_t path, std::span<double> out);

struct RegimeCEReport {
    std::vector<double> ce;  ///< (L_t/L_0 - 1) - beta (S_t/S_0 - 1) per path
    SampleMoments moments;
    std::vector<double> mean_occupation;  ///< path average of occupation fractions
    double mean_jumps = 0.0;  ///< average number of regime switches per path
    double horizon = 0.0;
    std::uint64_t seed = 0;
};

/// Continuous-time CE under regime switching with paired benchmark/LETF paths.
RegimeCEReport simulate_regime_ce(const RegimeModel& model, const LeverageSpec& spec,
                                  double horizon, std::size_t n_paths, std::uint64_t seed,
                                  const SimOptions& opts = {});

}  // namespace letf::sim
