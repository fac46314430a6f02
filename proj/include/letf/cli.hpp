#pragma once
// Subcommands of the letfce tool. Each cmd_* function is the library form of
// one subcommand; run() parses a command line and writes the artifacts.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "letf/empirical.hpp"
#include "letf/error.hpp"
#include "letf/estimation.hpp"
#include "letf/io.hpp"
#include "letf/sim/models.hpp"
#include "letf/sim/regime.hpp"
#include "letf/sim/simulate.hpp"
#include "letf/theory.hpp"

namespace letf::cli {

/// `points` evenly spaced values from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t points);

/// Seed of grid point `index` under a root seed; grid points are independent.
std::uint64_t point_seed(std::uint64_t root, std::uint64_t index);

/// 0 success, 2 config, 3 data, 4 numerical.
int exit_code(ErrorKind kind);

/// One Monte Carlo estimate in a parameter sweep.
struct SweepPoint {
    double sigma = 0.0;
    double x = 0.0;  ///< swept parameter (annualized mu or phi)
    sim::CEReport report;
    std::optional<double> ar1_approx;
};

struct SweepResult {
    std::string x_name;
    std::vector<SweepPoint> points;
};

struct SweepLeverageConfig {
    std::vector<double> mu_annual = linspace(-0.2, 0.2, 41);
    std::vector<double> sigmas{0.005, 0.01, 0.015};
    std::vector<int> betas{-3, -2, -1, 2, 3};
    double fee = 0.0;  ///< per period
    std::size_t n_steps = 252;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 0;
    sim::SimOptions sim;
};

/// i.i.d. Gaussian returns with daily mean mu_annual / 252; closed form is the
/// exact i.i.d. expectation.
SweepResult cmd_sweep_leverage(const SweepLeverageConfig& cfg);

struct SweepPhiConfig {
    std::vector<double> phis = linspace(-0.9, 0.9, 37);
    std::vector<double> sigmas{0.005, 0.01, 0.015};  ///< innovation std
    std::vector<int> betas{-3, -2, -1, 2, 3};
    double fee = 0.0;
    std::size_t n_steps = 252;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 0;
    sim::SimOptions sim;
};

/// Zero-mean AR(1) returns; reports the second-order expansion and the
/// AR(1) closed-form approximation next to the Monte Carlo mean.
SweepResult cmd_sweep_phi(const SweepPhiConfig& cfg);

enum class FrequencyModel { IID, AR1 };

struct SweepFrequencyConfig {
    FrequencyModel model = FrequencyModel::IID;
    std::vector<double> grid;  ///< annualized mu (iid) or phi (ar1); empty = default grid
    std::vector<std::size_t> blocks{1, 5, 21};
    std::vector<int> betas{-2, -1, 2, 3};
    double sigma = 0.01;
    double fee = 0.0;  ///< per day; a block of k days pays k * fee
    std::size_t n_steps = 252;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 0;
    sim::SimOptions sim;
};

/// Every block length is evaluated on the same daily paths of a grid point.
SweepResult cmd_sweep_frequency(const SweepFrequencyConfig& cfg);

/// sigma,<x>,beta,block,model,n_steps,n_paths,n_used,n_wiped,mc_mean,
/// mc_std_error,mc_std,closed_form,closed_form_label,ar1_approx
void write_sweep_csv(std::ostream& out, const SweepResult& r);

enum class FitModel { Garch, AR1 };

/// Fits the daily returns of a price CSV; returns the FitResult document.
io::Json cmd_fit(const std::filesystem::path& prices, FitModel model, est::ReturnScale scale);

/// AR(1)-GARCH(1,1) estimates for SPY daily returns in percent units.
sim::ArGarchParams spy_table_params();

/// Converts params stated in `units` into the percent units the simulator expects.
sim::ArGarchParams to_percent_units(const sim::ArGarchParams& p, est::ReturnScale units);

struct GarchCeConfig {
    sim::ArGarchParams params = spy_table_params();
    est::ReturnScale units = est::ReturnScale::Percent;
    std::vector<int> betas{-2, -1, 2, 3};
    double fee = 0.0;
    std::size_t n_steps = 252;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 0;
    bool control_row = true;  ///< adds beta = 1, whose CE is identically 0
    bool sensitivity = true;  ///< also runs with the params read in the other unit
    sim::SimOptions sim;
};

struct GarchCeRow {
    std::string interpretation;  ///< unit the params were read in
    sim::CEReport report;
};

/// Same seed for both interpretations, so rows differ only by the unit convention.
std::vector<GarchCeRow> cmd_garch_ce(const GarchCeConfig& cfg);

/// params_as,beta,n_steps,n_paths,n_used,n_wiped,mean,std_error,std,scale_note
void write_garch_ce_csv(std::ostream& out, std::span<const GarchCeRow> rows);

struct RegimeTableConfig {
    std::filesystem::path benchmark;
    std::map<int, std::filesystem::path> letfs;  ///< realized LETF price CSVs by beta
    std::optional<std::filesystem::path> regimes;
    emp::TableMode mode = emp::TableMode::Synthetic;
    std::vector<int> betas{-3, -2, -1, 2, 3};
};

emp::CETable cmd_regime_table(const RegimeTableConfig& cfg);

struct RollingConfig {
    std::filesystem::path benchmark;
    std::map<int, std::filesystem::path> letfs;  ///< realized series; other betas are synthetic
    std::vector<int> betas{-2, -1, 2, 3};
    std::vector<std::size_t> windows{60, 90, 120};
    std::filesystem::path out_dir;
};

/// Writes rolling_ce_<mode>_beta<b>_w<w>.csv and rolling_ar1_w<w>.csv into
/// out_dir; returns the files written.
std::vector<std::filesystem::path> cmd_rolling(const RollingConfig& cfg);

/// JSON object {"mu": [...], "sigma": [...], "generator": [[...]], "initial": [...]}.
sim::RegimeModel parse_regime_model(const std::string& json_text);

struct RegimeSimConfig {
    sim::RegimeModel model;
    int beta = 2;
    double fee = 0.0;  ///< continuous rate per unit time
    double horizon = 1.0;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 0;
    sim::SimOptions sim;
};

struct RegimeSimResult {
    sim::RegimeCEReport mc;
    std::vector<double> occupation;  ///< expected occupation measure
    double mixture = 0.0;            ///< occupation-weighted kernel approximation
    theory::CESign classification = theory::CESign::Zero;
    theory::CESign mc_sign = theory::CESign::Zero;  ///< Zero unless |mean| > 4 stderr
    std::optional<double> single_regime;            ///< exact value when M = 1
};

RegimeSimResult cmd_regime_sim(const RegimeSimConfig& cfg);
io::Json to_json(const RegimeSimResult& r, const RegimeSimConfig& cfg);

/// Parses argv, runs one subcommand and returns its exit code. Artifacts go to
/// files under --out (or `out` when a single artifact has no --out); notes and
/// errors go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace letf::cli
