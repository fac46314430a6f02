#pragma once

// Return-path generators and the batched Monte Carlo CE estimator.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "letf/core.hpp"
#include "letf/sim/models.hpp"
#include "letf/sim/parallel.hpp"

namespace letf::sim {

/// Steps simulated and discarded before the first emitted GARCH return.
inline constexpr std::size_t kGarchBurnIn = 250;

PathBatch simulate_iid(const IIDParams& params, std::size_t n_steps, std::size_t n_paths,
                       std::uint64_t seed, const SimOptions& opts = {});

/// X_0 ~ N(c / (1 - phi), sigma^2 / (1 - phi^2)) is drawn but not emitted.
PathBatch simulate_ar1(const AR1Params& params, std::size_t n_steps, std::size_t n_paths,
                       std::uint64_t seed, const SimOptions& opts = {});

/// Emits returns in the units of `params` (percent for Table-1 style inputs).
PathBatch simulate_ar1_garch(const ArGarchParams& params, std::size_t n_steps, std::size_t n_paths,
                             std::uint64_t seed, const SimOptions& opts = {});

struct GarchPath {
    std::vector<double> returns;    ///< params units
    std::vector<double> variances;  ///< sigma_t^2 for each emitted step
};

/// Single path `index` of simulate_ar1_garch with its conditional variances.
GarchPath simulate_ar1_garch_path(const ArGarchParams& params, std::size_t n_steps,
                                  std::uint64_t seed, std::uint64_t index);

/// Decimal simple returns for paths [first, first + count) of `model`, written
/// row-major into `out`. GARCH output is divided by 100; regime models are
/// sampled on a grid of 1/252 time units.
void generate_paths(const ModelParams& model, std::size_t n_steps, std::uint64_t seed,
                    std::size_t first, std::size_t count, std::span<double> out);

/// One leveraged product evaluated on a batch of benchmark paths.
struct CEJob {
    LeverageSpec spec{2};
    std::size_t block = 1;  ///< rebalancing period in steps
};

struct CEReport {
    std::vector<double> ce;  ///< per path; NaN where the path was wiped out
    double mean = 0.0;
    double std = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::size_t n_used = 0;
    std::size_t n_wiped = 0;
    std::optional<double> closed_form;  ///< analytic E[CE] when the model has one
    std::string closed_form_label;
    std::string model_tag;
    std::string scale_note;
    int beta = 0;
    std::size_t block = 1;
    std::size_t n_steps = 0;
    std::uint64_t seed = 0;
};

/// Evaluates every job on the same simulated paths (common random numbers).
/// Paths are block-aggregated when block > 1 with fee block * f per period;
/// tracking draws come from the Tracking stream with std tau per rebalancing
/// period. Wiped-out paths are excluded from the statistics and counted.
std::vector<CEReport> monte_carlo_ce(const ModelParams& model, std::span<const CEJob> jobs,
                                     std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                                     const SimOptions& opts = {});

CEReport monte_carlo_ce(const ModelParams& model, const LeverageSpec& spec, std::size_t n_steps,
                        std::size_t n_paths, std::uint64_t seed, std::size_t block = 1,
                        const SimOptions& opts = {});

}  // namespace letf::sim
