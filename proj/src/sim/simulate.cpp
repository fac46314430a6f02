#include "letf/sim/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "letf/error.hpp"
#include "letf/kernels.hpp"
#include "letf/rng.hpp"
#include "letf/sim/regime.hpp"
#include "letf/stats.hpp"
#include "letf/theory.hpp"

namespace letf::sim {
namespace {

constexpr double kPercent = 100.0;

void require_shape(std::size_t n_steps, std::size_t n_paths) {
    if (n_steps < 1) throw_config("invalid-horizon", "n_steps must be >= 1");
    if (n_paths < 1) throw_config("invalid-paths", "n_paths must be >= 1");
}

void fill_rows(std::uint64_t seed, Stream stream, std::size_t first, std::size_t count,
               std::size_t cols, std::span<double> z) {
    for (std::size_t p = 0; p < count; ++p) {
        PathRng rng(seed, stream, first + p);
        rng.fill_normal(z.subspan(p * cols, cols));
    }
}

void gen_iid(const IIDParams& p, std::size_t n, std::uint64_t seed, std::size_t first,
             std::size_t count, std::span<double> out) {
    fill_rows(seed, Stream::Returns, first, count, n, out);
    for (double& x : out) x = p.mu + p.sigma * x;
}

void gen_ar1(const AR1Params& p, std::size_t n, std::uint64_t seed, std::size_t first,
             std::size_t count, std::span<double> out) {
    std::vector<double> z(count * n), x0(count);
    const double m = p.stationary_mean(), s = std::sqrt(p.stationary_variance());
    for (std::size_t i = 0; i < count; ++i) {
        PathRng rng(seed, Stream::Returns, first + i);
        x0[i] = m + s * rng.normal();
        rng.fill_normal(std::span<double>(z).subspan(i * n, n));
    }
    kernels::active().ar1(z, x0, count, n, p.intercept, p.phi, p.sigma_eps, out);
}

void gen_garch(const ArGarchParams& p, std::size_t n, std::uint64_t seed, std::size_t first,
               std::size_t count, double divisor, std::span<double> out,
               std::span<double> variances) {
    const std::size_t cols = kGarchBurnIn + n;
    std::vector<double> z(count * cols);
    fill_rows(seed, Stream::Returns, first, count, cols, z);
    kernels::active().ar_garch(z, {count, kGarchBurnIn, n},
                               {p.mu, p.phi, p.omega, p.alpha, p.beta_g}, divisor, out, variances);
}

PathBatch make_batch(const ModelParams& model, std::size_t n_steps, std::size_t n_paths,
                     std::uint64_t seed) {
    PathBatch b;
    b.n_paths = n_paths;
    b.n_steps = n_steps;
    b.values.resize(n_steps * n_paths);
    b.seed = seed;
    b.model_tag = model_tag(model);
    b.scale_note = scale_note(model);
    return b;
}

std::optional<double> closed_form_for(const ModelParams& model, const CEJob& job,
                                      std::size_t n_steps, std::string& label) {
    const int beta = job.spec.beta();
    const double fee = job.spec.fee_daily();
    if (const auto* p = std::get_if<IIDParams>(&model)) {
        label = "exact i.i.d.";
        try {
            return theory::expected_ce_iid_blocked(p->mu, beta, fee, n_steps, job.block);
        } catch (const Error&) {
            return std::nullopt;
        }
    }
    if (const auto* p = std::get_if<AR1Params>(&model); p && p->intercept == 0.0 && job.block == 1) {
        label = "second-order autocorrelation";
        theory::AutocovSpec spec{0.0, n_steps > 1 ? theory::ar1_gammas(*p, n_steps - 1)
                                                  : std::vector<double>{}};
        return theory::expected_ce_autocorr(spec, beta, fee, n_steps);
    }
    return std::nullopt;
}

}  // namespace

PathBatch simulate_iid(const IIDParams& params, std::size_t n_steps, std::size_t n_paths,
                       std::uint64_t seed, const SimOptions& opts) {
    validate(params);
    require_shape(n_steps, n_paths);
    PathBatch b = make_batch(params, n_steps, n_paths, seed);
    for_each_chunk(n_paths, opts, [&](std::size_t first, std::size_t count) {
        gen_iid(params, n_steps, seed, first, count,
                std::span<double>(b.values).subspan(first * n_steps, count * n_steps));
    });
    return b;
}

PathBatch simulate_ar1(const AR1Params& params, std::size_t n_steps, std::size_t n_paths,
                       std::uint64_t seed, const SimOptions& opts) {
    validate(params);
    require_shape(n_steps, n_paths);
    PathBatch b = make_batch(params, n_steps, n_paths, seed);
    for_each_chunk(n_paths, opts, [&](std::size_t first, std::size_t count) {
        gen_ar1(params, n_steps, seed, first, count,
                std::span<double>(b.values).subspan(first * n_steps, count * n_steps));
    });
    return b;
}

PathBatch simulate_ar1_garch(const ArGarchParams& params, std::size_t n_steps, std::size_t n_paths,
                             std::uint64_t seed, const SimOptions& opts) {
    validate(params);
    require_shape(n_steps, n_paths);
    PathBatch b = make_batch(params, n_steps, n_paths, seed);
    b.scale_note = "percent returns (params units)";
    for_each_chunk(n_paths, opts, [&](std::size_t first, std::size_t count) {
        gen_garch(params, n_steps, seed, first, count, 1.0,
                  std::span<double>(b.values).subspan(first * n_steps, count * n_steps), {});
    });
    return b;
}

GarchPath simulate_ar1_garch_path(const ArGarchParams& params, std::size_t n_steps,
                                  std::uint64_t seed, std::uint64_t index) {
    validate(params);
    require_shape(n_steps, 1);
    GarchPath out;
    out.returns.resize(n_steps);
    out.variances.resize(n_steps);
    gen_garch(params, n_steps, seed, index, 1, 1.0, out.returns, out.variances);
    return out;
}

void generate_paths(const ModelParams& model, std::size_t n_steps, std::uint64_t seed,
                    std::size_t first, std::size_t count, std::span<double> out) {
    if (out.size() != n_steps * count) throw_config("invalid-shape", "output buffer size mismatch");
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, IIDParams>) {
                gen_iid(p, n_steps, seed, first, count, out);
            } else if constexpr (std::is_same_v<T, AR1Params>) {
                gen_ar1(p, n_steps, seed, first, count, out);
            } else if constexpr (std::is_same_v<T, ArGarchParams>) {
                gen_garch(p, n_steps, seed, first, count, kPercent, out, {});
            } else {
                for (std::size_t i = 0; i < count; ++i)
                    regime_grid_returns(p, n_steps, 1.0 / kTradingDays, seed, first + i,
                                        out.subspan(i * n_steps, n_steps));
            }
        },
        model);
}

std::vector<CEReport> monte_carlo_ce(const ModelParams& model, std::span<const CEJob> jobs,
                                     std::size_t n_steps, std::size_t n_paths, std::uint64_t seed,
                                     const SimOptions& opts) {
    validate(model);
    require_shape(n_steps, n_paths);
    for (const CEJob& job : jobs)
        if (job.block < 1 || job.block > n_steps)
            throw_config("invalid-block", "rebalancing block must be in [1, n_steps]");

    std::vector<CEReport> reports(jobs.size());
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        CEReport& r = reports[j];
        r.ce.assign(n_paths, 0.0);
        r.n_paths = n_paths;
        r.model_tag = model_tag(model);
        r.scale_note = scale_note(model);
        r.beta = jobs[j].spec.beta();
        r.block = jobs[j].block;
        r.n_steps = n_steps;
        r.seed = seed;
        r.closed_form = closed_form_for(model, jobs[j], n_steps, r.closed_form_label);
    }
    std::vector<std::vector<std::uint8_t>> wiped(jobs.size(), std::vector<std::uint8_t>(n_paths));

    const auto& k = kernels::active();
    for_each_chunk(n_paths, opts, [&](std::size_t first, std::size_t count) {
        std::vector<double> paths(count * n_steps);
        generate_paths(model, n_steps, seed, first, count, paths);
        std::vector<double> agg, noise, r_letf(count), r_etf(count);
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            const CEJob& job = jobs[j];
            const std::size_t periods = n_steps / job.block;
            std::span<const double> x = paths;
            if (job.block > 1) {
                agg.resize(count * periods);
                k.aggregate(paths, count, n_steps, job.block, agg);
                x = agg;
            }
            std::span<const double> e;
            if (const double tau = job.spec.tracking_sigma(); tau > 0.0) {
                noise.resize(count * periods);
                fill_rows(seed, Stream::Tracking, first, count, periods, noise);
                for (double& v : noise) {
                    v *= tau;
                    if (opts.clamp_tracking) v = std::clamp(v, -6.0 * tau, 6.0 * tau);
                }
                e = noise;
            }
            const double fee = static_cast<double>(job.block) * job.spec.fee_daily();
            k.compound_ce(x, e, count, periods, job.spec.beta(), fee,
                          {std::span<double>(reports[j].ce).subspan(first, count), r_letf, r_etf,
                           std::span<std::uint8_t>(wiped[j]).subspan(first, count)});
        }
    });

    std::vector<double> used;
    used.reserve(n_paths);
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        CEReport& r = reports[j];
        used.clear();
        for (std::size_t i = 0; i < n_paths; ++i) {
            if (wiped[j][i]) {
                r.ce[i] = std::numeric_limits<double>::quiet_NaN();
                ++r.n_wiped;
            } else {
                used.push_back(r.ce[i]);
            }
        }
        const SampleMoments m = sample_moments(used);
        r.n_used = m.n;
        r.mean = m.mean;
        r.std = m.std;
        r.std_error = m.std_error;
    }
    return reports;
}

CEReport monte_carlo_ce(const ModelParams& model, const LeverageSpec& spec, std::size_t n_steps,
                        std::size_t n_paths, std::uint64_t seed, std::size_t block,
                        const SimOptions& opts) {
    const CEJob job{spec, block};
    return std::move(monte_carlo_ce(model, std::span<const CEJob>(&job, 1), n_steps, n_paths, seed,
                                    opts)
                         .front());
}

}  // namespace letf::sim
