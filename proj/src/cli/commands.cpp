#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "letf/cli.hpp"
#include "letf/rng.hpp"

namespace letf::cli {
namespace {

// Grid-point seeds live on their own stream so they never coincide with a
// path seed of the same root.
constexpr auto kGridStream = static_cast<Stream>(0);

void require(bool ok, const std::string& code, const std::string& what) {
    if (!ok) throw_config(code, what);
}

void check_mc(std::size_t n_steps, std::size_t n_paths) {
    require(n_steps >= 1, "invalid-steps", "number of steps must be >= 1");
    require(n_paths >= 2, "invalid-paths", "at least 2 paths are needed for a standard error");
}

void check_betas(const std::vector<int>& betas) {
    require(!betas.empty(), "invalid-leverage", "no leverage ratios given");
    for (int b : betas) require(b != 0, "invalid-leverage", "leverage ratio must be nonzero");
}

std::string opt(const std::optional<double>& x) { return x ? io::format_double(*x) : ""; }

std::string beta_tag(int b) { return "beta" + std::to_string(b); }

ReturnSeries returns_of(const std::filesystem::path& p) { return emp::to_returns(emp::load_price_csv(p)); }

void keep_summary(std::vector<sim::CEReport>& reps) {
    for (auto& r : reps) std::vector<double>().swap(r.ce);
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points == 0) throw_config("invalid-grid", "grid needs at least one point");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw_config("invalid-grid", "grid bounds must be finite");
    if (points == 1) return {lo};
    std::vector<double> v(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) v[i] = lo + step * static_cast<double>(i);
    v.back() = hi;
    return v;
}

std::uint64_t point_seed(std::uint64_t root, std::uint64_t index) { return derive_seed(root, kGridStream, index); }

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Data: return 3;
        case ErrorKind::Numerical: return 4;
    }
    return 4;
}

SweepResult cmd_sweep_leverage(const SweepLeverageConfig& cfg) {
    check_mc(cfg.n_steps, cfg.n_paths);
    check_betas(cfg.betas);
    require(!cfg.mu_annual.empty() && !cfg.sigmas.empty(), "invalid-grid", "empty mu or sigma grid");
    std::vector<sim::CEJob> jobs;
    for (int b : cfg.betas) jobs.push_back({LeverageSpec(b, cfg.fee), 1});
    SweepResult r{"mu_annual", {}};
    std::uint64_t g = 0;
    for (double sigma : cfg.sigmas) {
        for (double mu : cfg.mu_annual) {
            const sim::IIDParams p{mu / sim::kTradingDays, sigma};
            auto reps = sim::monte_carlo_ce(p, jobs, cfg.n_steps, cfg.n_paths, point_seed(cfg.seed, g++), cfg.sim);
            keep_summary(reps);
            for (auto& rep : reps) r.points.push_back({sigma, mu, std::move(rep), std::nullopt});
        }
    }
    return r;
}

SweepResult cmd_sweep_phi(const SweepPhiConfig& cfg) {
    check_mc(cfg.n_steps, cfg.n_paths);
    check_betas(cfg.betas);
    require(!cfg.phis.empty() && !cfg.sigmas.empty(), "invalid-grid", "empty phi or sigma grid");
    std::vector<sim::CEJob> jobs;
    for (int b : cfg.betas) jobs.push_back({LeverageSpec(b, cfg.fee), 1});
    SweepResult r{"phi", {}};
    std::uint64_t g = 0;
    for (double sigma : cfg.sigmas) {
        for (double phi : cfg.phis) {
            const sim::AR1Params p{phi, sigma, 0.0};
            auto reps = sim::monte_carlo_ce(p, jobs, cfg.n_steps, cfg.n_paths, point_seed(cfg.seed, g++), cfg.sim);
            keep_summary(reps);
            for (auto& rep : reps) {
                std::optional<double> approx;
                if (rep.beta != 1 && cfg.fee == 0.0) approx = theory::expected_ce_ar1_approx(p, rep.beta, cfg.n_steps);
                r.points.push_back({sigma, phi, std::move(rep), approx});
            }
        }
    }
    return r;
}

SweepResult cmd_sweep_frequency(const SweepFrequencyConfig& cfg) {
    check_mc(cfg.n_steps, cfg.n_paths);
    check_betas(cfg.betas);
    require(!cfg.blocks.empty(), "invalid-block", "no rebalancing periods given");
    for (std::size_t k : cfg.blocks)
        require(k >= 1 && k <= cfg.n_steps, "invalid-block", "rebalancing period must be in [1, steps]");
    const bool iid = cfg.model == FrequencyModel::IID;
    std::vector<double> grid = cfg.grid;
    if (grid.empty()) grid = iid ? linspace(-0.2, 0.2, 41) : linspace(-0.9, 0.9, 37);
    std::vector<sim::CEJob> jobs;
    for (int b : cfg.betas)
        for (std::size_t k : cfg.blocks) jobs.push_back({LeverageSpec(b, cfg.fee), k});
    SweepResult r{iid ? "mu_annual" : "phi", {}};
    std::uint64_t g = 0;
    for (double x : grid) {
        const sim::ModelParams model = iid ? sim::ModelParams(sim::IIDParams{x / sim::kTradingDays, cfg.sigma})
                                           : sim::ModelParams(sim::AR1Params{x, cfg.sigma, 0.0});
        auto reps = sim::monte_carlo_ce(model, jobs, cfg.n_steps, cfg.n_paths, point_seed(cfg.seed, g++), cfg.sim);
        keep_summary(reps);
        for (auto& rep : reps) r.points.push_back({cfg.sigma, x, std::move(rep), std::nullopt});
    }
    return r;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
    out << "sigma," << r.x_name
        << ",beta,block,model,n_steps,n_paths,n_used,n_wiped,mc_mean,mc_std_error,mc_std,closed_form,"
           "closed_form_label,ar1_approx\n";
    for (const SweepPoint& p : r.points) {
        const sim::CEReport& c = p.report;
        out << io::format_double(p.sigma) << ',' << io::format_double(p.x) << ',' << c.beta << ',' << c.block << ','
            << c.model_tag << ',' << c.n_steps << ',' << c.n_paths << ',' << c.n_used << ',' << c.n_wiped << ','
            << io::format_double(c.mean) << ',' << io::format_double(c.std_error) << ',' << io::format_double(c.std)
            << ',' << opt(c.closed_form) << ',' << (c.closed_form ? c.closed_form_label : "") << ','
            << opt(p.ar1_approx) << '\n';
    }
}

io::Json cmd_fit(const std::filesystem::path& prices, FitModel model, est::ReturnScale scale) {
    const ReturnSeries r = returns_of(prices);
    io::Json j;
    if (model == FitModel::Garch) {
        est::GarchFitOptions o;
        o.scale = scale;
        j = io::to_json(est::fit_ar1_garch(r, o));
    } else {
        const double k = est::scale_factor(scale);
        std::vector<double> x(r.values().begin(), r.values().end());
        for (double& v : x) v *= k;
        j = io::to_json(est::estimate_ar1(x));
        j["scale"] = est::to_string(scale);
    }
    j["source"] = prices.filename().string();
    j["first_date"] = format_iso_date(r.dates().front());
    j["last_date"] = format_iso_date(r.dates().back());
    return j;
}

sim::ArGarchParams spy_table_params() { return {0.0918, -0.0490, 0.0357, 0.1747, 0.7969}; }

sim::ArGarchParams to_percent_units(const sim::ArGarchParams& p, est::ReturnScale units) {
    if (units == est::ReturnScale::Percent) return p;
    sim::ArGarchParams q = p;
    q.mu *= 100.0;
    q.omega *= 1e4;
    return q;
}

std::vector<GarchCeRow> cmd_garch_ce(const GarchCeConfig& cfg) {
    check_mc(cfg.n_steps, cfg.n_paths);
    check_betas(cfg.betas);
    std::vector<int> betas = cfg.betas;
    if (cfg.control_row && std::find(betas.begin(), betas.end(), 1) == betas.end()) betas.push_back(1);
    std::vector<sim::CEJob> jobs;
    for (int b : betas) jobs.push_back({LeverageSpec(b, cfg.fee), 1});

    std::vector<est::ReturnScale> readings{cfg.units};
    if (cfg.sensitivity)
        readings.push_back(cfg.units == est::ReturnScale::Percent ? est::ReturnScale::Decimal
                                                                  : est::ReturnScale::Percent);
    std::vector<GarchCeRow> rows;
    for (est::ReturnScale units : readings) {
        const sim::ArGarchParams p = to_percent_units(cfg.params, units);
        auto reps = sim::monte_carlo_ce(p, jobs, cfg.n_steps, cfg.n_paths, cfg.seed, cfg.sim);
        keep_summary(reps);
        for (auto& rep : reps) rows.push_back({est::to_string(units), std::move(rep)});
    }
    return rows;
}

void write_garch_ce_csv(std::ostream& out, std::span<const GarchCeRow> rows) {
    out << "params_as,beta,n_steps,n_paths,n_used,n_wiped,mean,std_error,std,scale_note\n";
    for (const GarchCeRow& r : rows) {
        const sim::CEReport& c = r.report;
        out << r.interpretation << ',' << c.beta << ',' << c.n_steps << ',' << c.n_paths << ',' << c.n_used << ','
            << c.n_wiped << ',' << io::format_double(c.mean) << ',' << io::format_double(c.std_error) << ','
            << io::format_double(c.std) << ',' << c.scale_note << '\n';
    }
}

emp::CETable cmd_regime_table(const RegimeTableConfig& cfg) {
    check_betas(cfg.betas);
    if (cfg.mode == emp::TableMode::Synthetic && !cfg.letfs.empty())
        throw_config("letf-requires-realized", "LETF price files are only used in realized mode");
    const ReturnSeries bench = returns_of(cfg.benchmark);
    std::map<int, ReturnSeries> realized;
    for (const auto& [b, path] : cfg.letfs) realized.emplace(b, returns_of(path));
    const auto windows = cfg.regimes ? emp::load_regime_windows(*cfg.regimes) : emp::default_regime_windows();
    return emp::regime_table(bench, windows, cfg.betas, cfg.mode, realized);
}

std::vector<std::filesystem::path> cmd_rolling(const RollingConfig& cfg) {
    check_betas(cfg.betas);
    require(!cfg.windows.empty(), "invalid-window", "no rolling windows given");
    require(!cfg.out_dir.empty(), "missing-out", "rolling writes several files and needs --out");
    const ReturnSeries bench = returns_of(cfg.benchmark);
    std::map<int, ReturnSeries> realized;
    for (const auto& [b, path] : cfg.letfs) {
        require(std::find(cfg.betas.begin(), cfg.betas.end(), b) != cfg.betas.end(), "letf-without-beta",
                "LETF series given for beta " + std::to_string(b) + " which is not in --betas");
        realized.emplace(b, returns_of(path));
    }
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, std::span<const RollingPoint> pts) {
        std::ostringstream s;
        io::write_rolling_csv(s, pts);
        const auto path = cfg.out_dir / name;
        io::write_text_file(path, s.str());
        written.push_back(path);
    };
    for (std::size_t w : cfg.windows) {
        emit("rolling_ar1_w" + std::to_string(w) + ".csv", est::rolling_ar1(bench, w));
        for (int b : cfg.betas) {
            const auto it = realized.find(b);
            const bool real = it != realized.end();
            const auto pts = real ? emp::rolling_ce(bench, it->second, b, w) : emp::rolling_ce(bench, b, w);
            emit(std::string("rolling_ce_") + (real ? "realized_" : "synthetic_") + beta_tag(b) + "_w" +
                     std::to_string(w) + ".csv",
                 pts);
        }
    }
    return written;
}

sim::RegimeModel parse_regime_model(const std::string& json_text) {
    sim::RegimeModel m;
    try {
        const auto j = nlohmann::json::parse(json_text);
        m.mu = j.at("mu").get<std::vector<double>>();
        m.sigma = j.at("sigma").get<std::vector<double>>();
        for (const auto& row : j.at("generator")) {
            const auto r = row.get<std::vector<double>>();
            if (r.size() != m.mu.size()) throw_config("invalid-model", "generator must be square with one row per regime");
            m.generator.insert(m.generator.end(), r.begin(), r.end());
        }
        if (j.contains("initial")) {
            m.initial = j.at("initial").get<std::vector<double>>();
        } else {
            m.initial.assign(m.mu.size(), 0.0);
            if (!m.initial.empty()) m.initial[0] = 1.0;
        }
    } catch (const nlohmann::json::exception& e) {
        throw_config("invalid-model", std::string("regime model JSON: ") + e.what());
    }
    try {
        sim::validate(m);
    } catch (const Error& e) {
        throw_config("invalid-model", e.what());
    }
    return m;
}

RegimeSimResult cmd_regime_sim(const RegimeSimConfig& cfg) {
    require(cfg.beta != 0, "invalid-leverage", "leverage ratio must be nonzero");
    require(cfg.horizon > 0.0 && std::isfinite(cfg.horizon), "invalid-horizon", "horizon must be > 0");
    check_mc(1, cfg.n_paths);
    RegimeSimResult r;
    r.mc = sim::simulate_regime_ce(cfg.model, LeverageSpec(cfg.beta, cfg.fee), cfg.horizon, cfg.n_paths, cfg.seed,
                                   cfg.sim);
    r.occupation = theory::expected_occupation(cfg.model, cfg.horizon);
    const theory::RegimeMix mix{r.occupation, cfg.model.mu, cfg.horizon, cfg.beta, cfg.fee};
    r.mixture = theory::expected_ce_regime(mix);
    r.classification = theory::ce_sign_regime(mix);
    const auto& m = r.mc.moments;
    if (m.mean > 4.0 * m.std_error)
        r.mc_sign = theory::CESign::Positive;
    else if (m.mean < -4.0 * m.std_error)
        r.mc_sign = theory::CESign::Negative;
    if (cfg.model.size() == 1)
        r.single_regime = (cfg.fee == 0.0 && cfg.beta != 1)
                              ? theory::ce_single_regime(cfg.model.mu[0], cfg.beta, cfg.horizon)
                              : r.mixture;
    return r;
}

io::Json to_json(const RegimeSimResult& r, const RegimeSimConfig& cfg) {
    auto num = [](double x) { return std::isfinite(x) ? io::Json(x) : io::Json(nullptr); };
    const std::size_t n = cfg.model.size();
    io::Json gen = io::Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        io::Json row = io::Json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(cfg.model.rate(i, j));
        gen.push_back(row);
    }
    const auto& m = r.mc.moments;
    io::Json j;
    j["model"] = {{"mu", cfg.model.mu}, {"sigma", cfg.model.sigma}, {"generator", gen}, {"initial", cfg.model.initial}};
    j["beta"] = cfg.beta;
    j["fee"] = cfg.fee;
    j["horizon"] = cfg.horizon;
    j["seed"] = cfg.seed;
    j["n_paths"] = m.n;
    j["mc_mean"] = num(m.mean);
    j["mc_std_error"] = num(m.std_error);
    j["mc_std"] = num(m.std);
    j["mixture_approximation"] = num(r.mixture);
    const double gap = r.mixture - m.mean;
    j["approximation_error"] = num(gap);
    j["approximation_error_in_stderr"] = m.std_error > 0.0 ? num(gap / m.std_error) : io::Json(nullptr);
    j["occupation_expected"] = r.occupation;
    j["occupation_simulated"] = r.mc.mean_occupation;
    j["mean_switches"] = num(r.mc.mean_jumps);
    j["classification"] = theory::to_string(r.classification);
    j["mc_sign"] = theory::to_string(r.mc_sign);
    j["single_regime_exact"] = r.single_regime ? num(*r.single_regime) : io::Json(nullptr);
    return j;
}

}  // namespace letf::cli
