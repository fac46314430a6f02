#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "letf/cli.hpp"

namespace letf::cli {
namespace {

struct Common {
    std::uint64_t seed = 0;
    std::size_t paths = 10000;
    std::string out;
    std::string config;
    std::size_t threads = 0;
};

struct Grid {
    double lo, hi;
    std::size_t points;
};

std::string read_file(const std::string& path, const char* what) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw_config("file-not-found", std::string(what) + " not found: " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string config_value(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw_config("invalid-config", "config values must be strings, numbers, booleans or arrays of them");
}

// Keys name long options of the active subcommand; options already given on
// the command line keep their command-line value.
void apply_config(CLI::App& sub, const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path, "config file"));
    } catch (const nlohmann::json::exception& e) {
        throw_config("invalid-config", path + ": " + e.what());
    }
    if (!j.is_object()) throw_config("invalid-config", path + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        CLI::Option* o = sub.get_option_no_throw("--" + key);
        if (o == nullptr || key == "config") throw_config("invalid-config", "unknown option in config: " + key);
        if (o->count() > 0) continue;
        std::vector<std::string> vals;
        if (value.is_array())
            for (const auto& v : value) vals.push_back(config_value(v));
        else
            vals.push_back(config_value(value));
        o->add_result(vals);
        try {
            o->run_callback();
        } catch (const CLI::ParseError& e) {
            throw_config("invalid-config", "config key " + key + ": " + e.what());
        }
    }
}

est::ReturnScale parse_scale(const std::string& s) {
    return s == "decimal" ? est::ReturnScale::Decimal : est::ReturnScale::Percent;
}

std::map<int, std::filesystem::path> parse_letfs(const std::vector<std::string>& specs) {
    std::map<int, std::filesystem::path> out;
    for (const std::string& s : specs) {
        const auto eq = s.find('=');
        int beta = 0;
        try {
            if (eq == std::string::npos) throw std::invalid_argument("no '='");
            std::size_t used = 0;
            beta = std::stoi(s.substr(0, eq), &used);
            if (used != eq) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw_config("invalid-letf", "expected BETA=PATH, got " + s);
        }
        if (!out.emplace(beta, s.substr(eq + 1)).second)
            throw_config("invalid-letf", "LETF given twice for beta " + std::to_string(beta));
    }
    return out;
}

void add_common(CLI::App* sub, Common& c, bool stochastic) {
    sub->add_option("--config", c.config, "JSON object of option values; command-line flags take precedence");
    sub->add_option("--out", c.out, "Output directory (default: print to stdout)");
    if (!stochastic) return;
    sub->add_option("--seed", c.seed, "Root seed (required)");
    sub->add_option("--paths", c.paths, "Monte Carlo paths")->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads (0 = all cores); output does not depend on it")
        ->capture_default_str();
}

void add_grid(CLI::App* sub, const std::string& name, Grid& g, const std::string& what) {
    sub->add_option("--" + name + "-min", g.lo, "Lowest " + what)->capture_default_str();
    sub->add_option("--" + name + "-max", g.hi, "Highest " + what)->capture_default_str();
    sub->add_option("--" + name + "-points", g.points, "Grid points")->capture_default_str();
}

CLI::Option* add_betas(CLI::App* sub, std::vector<int>& betas) {
    return sub->add_option("--betas", betas, "Leverage ratios, comma separated (use --betas=-2,2)")
        ->delimiter(',')
        ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compounding effect of leveraged ETFs: simulation, closed forms, estimation and data tables.",
                 "letfce"};
    app.require_subcommand(1);

    Common common;
    std::string scale = "percent";
    std::function<void()> action;
    std::string artifact;  // file name under --out for single-artifact commands
    std::string payload;

    auto sim_opts = [&] {
        sim::SimOptions o;
        o.threads = common.threads;
        return o;
    };
    auto need_seed = [&] {
        if (app.get_subcommands().front()->get_option("--seed")->count() == 0)
            throw_config("missing-seed", "--seed is required for stochastic commands");
    };

    // sweep-leverage
    SweepLeverageConfig lev;
    Grid lev_mu{-0.2, 0.2, 41};
    auto* s_lev = app.add_subcommand("sweep-leverage", "Monte Carlo vs closed-form CE over drift and leverage (i.i.d.)");
    add_common(s_lev, common, true);
    add_grid(s_lev, "mu", lev_mu, "annualized drift");
    s_lev->add_option("--sigma", lev.sigmas, "Daily volatilities")->delimiter(',')->capture_default_str();
    add_betas(s_lev, lev.betas);
    s_lev->add_option("--fee", lev.fee, "Daily fee")->capture_default_str();
    s_lev->add_option("--steps", lev.n_steps, "Periods per path")->capture_default_str();
    s_lev->callback([&] {
        action = [&] {
            need_seed();
            lev.mu_annual = linspace(lev_mu.lo, lev_mu.hi, lev_mu.points);
            lev.n_paths = common.paths;
            lev.seed = common.seed;
            lev.sim = sim_opts();
            std::ostringstream s;
            write_sweep_csv(s, cmd_sweep_leverage(lev));
            payload = s.str();
            artifact = "sweep_leverage.csv";
        };
    });

    // sweep-phi
    SweepPhiConfig phi;
    Grid phi_grid{-0.9, 0.9, 37};
    auto* s_phi = app.add_subcommand("sweep-phi", "Monte Carlo vs approximations of CE over the AR(1) coefficient");
    add_common(s_phi, common, true);
    add_grid(s_phi, "phi", phi_grid, "AR(1) coefficient");
    s_phi->add_option("--sigma", phi.sigmas, "Innovation volatilities")->delimiter(',')->capture_default_str();
    add_betas(s_phi, phi.betas);
    s_phi->add_option("--fee", phi.fee, "Daily fee")->capture_default_str();
    s_phi->add_option("--steps", phi.n_steps, "Periods per path")->capture_default_str();
    s_phi->callback([&] {
        action = [&] {
            need_seed();
            phi.phis = linspace(phi_grid.lo, phi_grid.hi, phi_grid.points);
            phi.n_paths = common.paths;
            phi.seed = common.seed;
            phi.sim = sim_opts();
            std::ostringstream s;
            write_sweep_csv(s, cmd_sweep_phi(phi));
            payload = s.str();
            artifact = "sweep_phi.csv";
        };
    });

    // sweep-frequency
    SweepFrequencyConfig freq;
    std::string freq_model = "iid";
    Grid freq_grid{0.0, 0.0, 0};
    auto* s_freq = app.add_subcommand("sweep-frequency", "CE under daily, weekly and monthly rebalancing");
    add_common(s_freq, common, true);
    s_freq->add_option("--model", freq_model, "iid (grid over annualized drift) or ar1 (grid over phi)")
        ->check(CLI::IsMember({"iid", "ar1"}))
        ->capture_default_str();
    s_freq->add_option("--grid-min", freq_grid.lo, "Lowest grid value (default -0.2 iid, -0.9 ar1)");
    s_freq->add_option("--grid-max", freq_grid.hi, "Highest grid value (default 0.2 iid, 0.9 ar1)");
    s_freq->add_option("--grid-points", freq_grid.points, "Grid points (default 41 iid, 37 ar1)");
    s_freq->add_option("--blocks", freq.blocks, "Rebalancing periods in days")->delimiter(',')->capture_default_str();
    s_freq->add_option("--sigma", freq.sigma, "Daily (innovation) volatility")->capture_default_str();
    add_betas(s_freq, freq.betas);
    s_freq->add_option("--fee", freq.fee, "Daily fee")->capture_default_str();
    s_freq->add_option("--steps", freq.n_steps, "Days per path")->capture_default_str();
    s_freq->callback([&] {
        action = [&] {
            need_seed();
            freq.model = freq_model == "iid" ? FrequencyModel::IID : FrequencyModel::AR1;
            const bool iid = freq.model == FrequencyModel::IID;
            const double lo = s_freq->get_option("--grid-min")->count() ? freq_grid.lo : (iid ? -0.2 : -0.9);
            const double hi = s_freq->get_option("--grid-max")->count() ? freq_grid.hi : (iid ? 0.2 : 0.9);
            const std::size_t pts = s_freq->get_option("--grid-points")->count() ? freq_grid.points : (iid ? 41 : 37);
            freq.grid = linspace(lo, hi, pts);
            freq.n_paths = common.paths;
            freq.seed = common.seed;
            freq.sim = sim_opts();
            std::ostringstream s;
            write_sweep_csv(s, cmd_sweep_frequency(freq));
            payload = s.str();
            artifact = "sweep_frequency.csv";
        };
    });

    // fit
    std::string fit_csv, fit_model = "garch";
    auto* s_fit = app.add_subcommand("fit", "Fit AR(1)-GARCH(1,1) or AR(1) to the daily returns of a price CSV");
    add_common(s_fit, common, false);
    s_fit->add_option("--prices", fit_csv, "CSV with header date,adj_close");
    s_fit->add_option("--model", fit_model, "garch or ar1")->check(CLI::IsMember({"garch", "ar1"}))->capture_default_str();
    s_fit->add_option("--scale", scale, "Units of estimation")
        ->check(CLI::IsMember({"decimal", "percent"}))
        ->capture_default_str();
    s_fit->callback([&] {
        action = [&] {
            if (fit_csv.empty()) throw_config("missing-input", "--prices is required");
            payload = io::dump(cmd_fit(fit_csv, fit_model == "garch" ? FitModel::Garch : FitModel::AR1,
                                       parse_scale(scale)));
            artifact = "fit.json";
        };
    });

    // garch-ce
    GarchCeConfig gce;
    std::string gce_params, gce_fit;
    bool no_sensitivity = false, no_control = false;
    auto* s_gce = app.add_subcommand("garch-ce", "Monte Carlo CE under AR(1)-GARCH(1,1) returns");
    add_common(s_gce, common, true);
    s_gce->add_option("--params", gce_params,
                      "JSON {mu, phi, omega, alpha, beta} (default: SPY estimates in percent units)");
    s_gce->add_option("--fit", gce_fit, "Price CSV to estimate the parameters from instead");
    s_gce->add_option("--scale", scale, "Units the parameters are stated in")
        ->check(CLI::IsMember({"decimal", "percent"}))
        ->capture_default_str();
    add_betas(s_gce, gce.betas);
    s_gce->add_option("--fee", gce.fee, "Daily fee")->capture_default_str();
    s_gce->add_option("--steps", gce.n_steps, "Days per path")->capture_default_str();
    s_gce->add_flag("--no-sensitivity", no_sensitivity, "Skip the run with the other unit convention");
    s_gce->add_flag("--no-control", no_control, "Skip the beta = 1 control row");
    s_gce->callback([&] {
        action = [&] {
            need_seed();
            if (!gce_params.empty() && !gce_fit.empty())
                throw_config("conflicting-options", "--params and --fit are mutually exclusive");
            gce.units = parse_scale(scale);
            if (!gce_params.empty()) {
                try {
                    const auto j = nlohmann::json::parse(read_file(gce_params, "params file"));
                    gce.params = {j.at("mu").get<double>(), j.at("phi").get<double>(), j.at("omega").get<double>(),
                                  j.at("alpha").get<double>(), j.at("beta").get<double>()};
                } catch (const nlohmann::json::exception& e) {
                    throw_config("invalid-params", gce_params + ": " + e.what());
                }
            } else if (!gce_fit.empty()) {
                est::GarchFitOptions o;
                o.scale = gce.units;
                const est::GarchFit f = est::fit_ar1_garch(emp::to_returns(emp::load_price_csv(gce_fit)), o);
                if (!f.converged) throw_numerical("fit-not-converged", "GARCH fit did not converge: " + f.message);
                gce.params = f.params;
            }
            gce.sensitivity = !no_sensitivity;
            gce.control_row = !no_control;
            gce.n_paths = common.paths;
            gce.seed = common.seed;
            gce.sim = sim_opts();
            std::ostringstream s;
            write_garch_ce_csv(s, cmd_garch_ce(gce));
            payload = s.str();
            artifact = "garch_ce.csv";
        };
    });

    // regime-table
    RegimeTableConfig rt;
    std::string rt_bench, rt_regimes, rt_mode = "synthetic";
    std::vector<std::string> rt_letfs;
    auto* s_rt = app.add_subcommand("regime-table", "CE per market regime window and leverage ratio");
    add_common(s_rt, common, false);
    s_rt->add_option("--benchmark", rt_bench, "Benchmark price CSV");
    s_rt->add_option("--letf", rt_letfs, "Realized LETF prices as BETA=PATH (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    s_rt->add_option("--regimes", rt_regimes, "Regime windows JSON (default: the six study periods)");
    s_rt->add_option("--mode", rt_mode, "synthetic or realized")
        ->check(CLI::IsMember({"synthetic", "realized"}))
        ->capture_default_str();
    add_betas(s_rt, rt.betas);
    s_rt->callback([&] {
        action = [&] {
            if (rt_bench.empty()) throw_config("missing-input", "--benchmark is required");
            rt.benchmark = rt_bench;
            rt.letfs = parse_letfs(rt_letfs);
            if (!rt_regimes.empty()) rt.regimes = rt_regimes;
            rt.mode = rt_mode == "synthetic" ? emp::TableMode::Synthetic : emp::TableMode::Realized;
            const emp::CETable t = cmd_regime_table(rt);
            for (const auto& w : t.warnings) err << "warning: " << w << '\n';
            std::ostringstream s;
            io::write_ce_table_csv(s, t);
            payload = s.str();
            artifact = "regime_table.csv";
        };
    });

    // rolling
    RollingConfig roll;
    std::string roll_bench;
    std::vector<std::string> roll_letfs;
    auto* s_roll = app.add_subcommand("rolling", "Rolling-window CE and AR(1) coefficient series");
    add_common(s_roll, common, false);
    s_roll->add_option("--benchmark", roll_bench, "Benchmark price CSV");
    s_roll->add_option("--letf", roll_letfs, "Realized LETF prices as BETA=PATH (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    add_betas(s_roll, roll.betas);
    s_roll->add_option("--windows", roll.windows, "Window lengths in days")->delimiter(',')->capture_default_str();
    s_roll->callback([&] {
        action = [&] {
            if (roll_bench.empty()) throw_config("missing-input", "--benchmark is required");
            if (common.out.empty()) throw_config("missing-out", "rolling writes several files and needs --out");
            roll.benchmark = roll_bench;
            roll.letfs = parse_letfs(roll_letfs);
            roll.out_dir = common.out;
            for (const auto& p : cmd_rolling(roll)) err << "wrote " << p.string() << '\n';
        };
    });

    // regime-sim
    RegimeSimConfig rs;
    std::string rs_model;
    auto* s_rs = app.add_subcommand("regime-sim", "Regime-switching GBM: Monte Carlo CE vs the occupation mixture");
    add_common(s_rs, common, true);
    s_rs->add_option("--model", rs_model, "Regime model JSON {mu, sigma, generator, initial}");
    s_rs->add_option("--beta", rs.beta, "Leverage ratio")->capture_default_str();
    s_rs->add_option("--fee", rs.fee, "Continuous fee rate per unit time")->capture_default_str();
    s_rs->add_option("--horizon", rs.horizon, "Horizon in time units")->capture_default_str();
    s_rs->callback([&] {
        action = [&] {
            need_seed();
            if (rs_model.empty()) throw_config("missing-input", "--model is required");
            rs.model = parse_regime_model(read_file(rs_model, "model file"));
            rs.n_paths = common.paths;
            rs.seed = common.seed;
            rs.sim = sim_opts();
            payload = io::dump(to_json(cmd_regime_sim(rs), rs));
            artifact = "regime_sim.json";
        };
    });

    try {
        app.parse(argc, argv);
        CLI::App* sub = app.get_subcommands().front();
        if (!common.config.empty()) apply_config(*sub, common.config);
        action();
        if (!artifact.empty()) {
            if (common.out.empty()) {
                out << payload;
            } else {
                const auto path = std::filesystem::path(common.out) / artifact;
                io::write_text_file(path, payload);
                err << "wrote " << path.string() << '\n';
            }
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_code(ErrorKind::Config);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(ErrorKind::Numerical);
    }
}

}  // namespace letf::cli
