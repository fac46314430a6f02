#include "letf/sim/regime.hpp"

#include <cmath>
#include <limits>

#include "letf/error.hpp"
#include "letf/rng.hpp"

namespace letf::sim {
namespace {

void require_horizon(double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw_config("invalid-horizon", "horizon must be positive and finite");
}

// Index drawn with probability weights[i] / total using one uniform; entries
// with zero weight are never returned.
std::size_t categorical(std::span<const double> weights, double total, double u,
                        std::size_t skip = std::numeric_limits<std::size_t>::max()) {
    const double target = u * total;
    double cum = 0.0;
    std::size_t last = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (j == skip || !(weights[j] > 0.0)) continue;
        cum += weights[j];
        last = j;
        if (target < cum) return j;
    }
    return last;
}

struct LogGrowth {
    double s = 0.0;
    double l = 0.0;
};

// Walks regime segments merged with the uniform grid g_k = horizon k / n_grid.
// One Brownian draw per nonempty piece; on_grid(k, log_s) fires at each grid
// point k = 1..n_grid.
template <class OnGrid>
LogGrowth walk(const RegimeModel& m, const RegimePath& path, std::size_t n_grid, double beta,
               double fee, PathRng& bm, OnGrid&& on_grid) {
    LogGrowth g;
    const double horizon = path.horizon;
    double t = 0.0;
    std::size_t seg = 0;
    std::size_t k = 1;
    while (k <= n_grid) {
        const double next_jump = seg + 1 < path.states.size()
                                     ? path.times[seg + 1]
                                     : std::numeric_limits<double>::infinity();
        const double next_grid = k == n_grid ? horizon : horizon * static_cast<double>(k) /
                                                             static_cast<double>(n_grid);
        const double boundary = std::min(next_jump, next_grid);
        const double d = boundary - t;
        if (d > 0.0) {
            const std::size_t j = path.states[seg];
            const double mu = m.mu[j], sig = m.sigma[j];
            const double z = bm.normal();
            const double root = std::sqrt(d);
            g.s += (mu - 0.5 * sig * sig) * d + sig * root * z;
            g.l += (beta * mu - 0.5 * beta * beta * sig * sig - fee) * d + (beta * sig) * root * z;
        }
        t = boundary;
        if (boundary == next_grid) {
            on_grid(k, g.s);
            ++k;
        }
        if (boundary == next_jump) ++seg;
    }
    return g;
}

std::size_t grid_points(double horizon, std::size_t grid_per_unit) {
    const auto n = static_cast<std::size_t>(std::llround(horizon * static_cast<double>(grid_per_unit)));
    return std::max<std::size_t>(1, n);
}

LogGrowth paired_path(const RegimeModel& m, double horizon, std::size_t n_grid, double beta,
                      double fee, std::uint64_t seed, std::uint64_t index, RegimePath* keep) {
    RegimePath path = simulate_markov_chain(m, horizon, seed, index);
    PathRng bm(seed, Stream::Brownian, index);
    const LogGrowth g = walk(m, path, n_grid, beta, fee, bm, [](std::size_t, double) {});
    if (keep) *keep = std::move(path);
    return g;
}

}  // namespace

RegimePath simulate_markov_chain(const RegimeModel& model, double horizon, std::uint64_t seed,
                                 std::uint64_t path) {
    validate(model);
    require_horizon(horizon);
    const std::size_t n = model.size();
    PathRng rng(seed, Stream::Regime, path);
    RegimePath out;
    out.horizon = horizon;
    double total = 0.0;
    for (double p : model.initial) total += p;
    std::size_t state = categorical(model.initial, total, rng.uniform());
    double t = 0.0;
    out.times.push_back(0.0);
    out.states.push_back(state);
    std::vector<double> row(n);
    for (;;) {
        const double rate = -model.rate(state, state);
        if (!(rate > 0.0)) break;  // absorbing
        t += rng.exponential(rate);
        if (t >= horizon) break;
        for (std::size_t j = 0; j < n; ++j) row[j] = j == state ? 0.0 : model.rate(state, j);
        state = categorical(row, rate, rng.uniform(), state);
        out.times.push_back(t);
        out.states.push_back(state);
    }
    return out;
}

std::vector<double> occupation_fractions(const RegimePath& path, double horizon,
                                         std::size_t n_states) {
    require_horizon(horizon);
    std::vector<double> occ(n_states, 0.0);
    for (std::size_t k = 0; k < path.states.size(); ++k) {
        const double end = k + 1 < path.times.size() ? path.times[k + 1] : horizon;
        occ.at(path.states[k]) += (end - path.times[k]) / horizon;
    }
    return occ;
}

RegimeGbmBatch simulate_regime_gbm(const RegimeModel& model, double horizon, std::size_t n_paths,
                                   std::uint64_t seed, std::size_t grid_per_unit,
                                   const SimOptions& opts) {
    validate(model);
    require_horizon(horizon);
    const std::size_t n_grid = grid_points(horizon, grid_per_unit);
    RegimeGbmBatch out;
    out.regimes.resize(n_paths);
    out.growth.resize(n_paths);
    out.grid_returns.n_paths = n_paths;
    out.grid_returns.n_steps = n_grid;
    out.grid_returns.values.resize(n_paths * n_grid);
    out.grid_returns.seed = seed;
    out.grid_returns.model_tag = model_tag(model);
    out.grid_returns.scale_note = scale_note(model);
    for_each_chunk(n_paths, opts, [&](std::size_t first, std::size_t count) {
        for (std::size_t i = first; i < first + count; ++i) {
            RegimePath path = simulate_markov_chain(model, horizon, seed, i);
            PathBatch& b = out.grid_returns;
            double* row = b.values.data() + i * n_grid;
            double prev = 0.0;
            PathRng bm(seed, Stream::Brownian, i);
            const LogGrowth g = walk(model, path, n_grid, 1.0, 0.0, bm, [&](std::size_t k, double ls) {
                row[k - 1] = std::expm1(ls - prev);
                prev = ls;
            });
            out.growth[i] = std::exp(g.s);
            out.regimes[i] = std::move(path);
        }
    });
    return out;
}

std::vector<double> simulate_regime_letf(const RegimeModel& model, const LeverageSpec& spec,
                                         double horizon, std::size_t n_paths, std::uint64_t seed,
                                         std::size_t grid_per_unit, const SimOptions& opts) {
    validate(model);
    require_horizon(horizon);
    const std::size_t n_grid = grid_points(horizon, grid_per_unit);
    std::vector<double> growth(n_paths);
    for_each_chunk(n_paths, opts, [&](std::size_t first, std::size_t count) {
        for (std::size_t i = first; i < first + count; ++i)
            growth[i] = std::exp(paired_path(model, horizon, n_grid, spec.beta(), spec.fee_daily(),
                                             seed, i, nullptr)
                                     .l);
    });
    return growth;
}

void regime_grid_returns(const RegimeModel& model, std::size_t n_steps, double dt,
                         std::uint64_t seed, std::uint64_t path, std::span<double> out) {
    if (n_steps == 0 || out.size() != n_steps)
        throw_config("invalid-shape", "grid output must hold n_steps >= 1 returns");
    const double horizon = static_cast<double>(n_steps) * dt;
    const RegimePath rp = simulate_markov_chain(model, horizon, seed, path);
    PathRng bm(seed, Stream::Brownian, path);
    double prev = 0.0;
    walk(model, rp, n_steps, 1.0, 0.0, bm, [&](std::size_t k, double ls) {
        out[k - 1] = std::expm1(ls - prev);
        prev = ls;
    });
}

RegimeCEReport simulate_regime_ce(const RegimeModel& model, const LeverageSpec& spec,
                                  double horizon, std::size_t n_paths, std::uint64_t seed,
                                  const SimOptions& opts) {
    validate(model);
    require_horizon(horizon);
    if (n_paths < 2) throw_config("invalid-paths", "need at least two paths");
    const std::size_t n_grid = grid_points(horizon, kRegimeGridPerUnit);
    const std::size_t m = model.size();
    const double beta = spec.beta();
    RegimeCEReport rep;
    rep.horizon = horizon;
    rep.seed = seed;
    rep.ce.resize(n_paths);
    std::vector<double> occ(n_paths * m);
    std::vector<double> jumps(n_paths);
    for_each_chunk(n_paths, opts, [&](std::size_t first, std::size_t count) {
        RegimePath path;
        for (std::size_t i = first; i < first + count; ++i) {
            const LogGrowth g = paired_path(model, horizon, n_grid, beta, spec.fee_daily(), seed, i, &path);
            rep.ce[i] = std::expm1(g.l) - beta * std::expm1(g.s);
            const auto o = occupation_fractions(path, horizon, m);
            std::copy(o.begin(), o.end(), occ.begin() + static_cast<std::ptrdiff_t>(i * m));
            jumps[i] = static_cast<double>(path.jumps());
        }
    });
    rep.moments = sample_moments(rep.ce);
    rep.mean_occupation.resize(m);
    std::vector<double> column(n_paths);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n_paths; ++i) column[i] = occ[i * m + j];
        rep.mean_occupation[j] = sample_moments(column).mean;
    }
    rep.mean_jumps = sample_moments(jumps).mean;
    return rep;
}

}  // namespace letf::sim
