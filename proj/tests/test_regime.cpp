#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "letf/error.hpp"
#include "letf/sim/regime.hpp"
#include "letf/sim/simulate.hpp"
#include "letf/stats.hpp"
#include "letf/theory.hpp"

using namespace letf;
using namespace letf::sim;

namespace {

RegimeModel single(double mu, double sigma) { return {{mu}, {sigma}, {0.0}, {1.0}}; }

RegimeModel two_state(double rate, double mu0, double mu1, double s0, double s1) {
    return {{mu0, mu1}, {s0, s1}, {-rate, rate, rate, -rate}, {0.5, 0.5}};
}

}  // namespace

TEST_CASE("single-regime chain never jumps") {
    const RegimePath p = simulate_markov_chain(single(0.1, 0.2), 3.0, 1);
    CHECK(p.states.size() == 1);
    CHECK(p.states[0] == 0);
    CHECK(p.times[0] == 0.0);
    const auto occ = occupation_fractions(p, 3.0, 1);
    CHECK(occ[0] == 1.0);
}

TEST_CASE("jump counts are Poisson") {
    const RegimeModel m = two_state(100.0, 0.0, 0.0, 0.1, 0.1);
    const std::size_t n = 2000;
    std::vector<double> jumps(n);
    for (std::size_t i = 0; i < n; ++i) jumps[i] = static_cast<double>(simulate_markov_chain(m, 1.0, 42, i).jumps());
    const SampleMoments s = sample_moments(jumps);
    CHECK(std::abs(s.mean - 100.0) <= 4.0 * std::sqrt(100.0));
    CHECK(std::abs(s.mean - 100.0) <= 4.0 * 10.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("chain simulation is reproducible") {
    const RegimeModel m = two_state(5.0, 0.1, -0.1, 0.1, 0.2);
    const RegimePath a = simulate_markov_chain(m, 2.0, 9, 4);
    const RegimePath b = simulate_markov_chain(m, 2.0, 9, 4);
    CHECK(a.times == b.times);
    CHECK(a.states == b.states);
    CHECK(simulate_markov_chain(m, 2.0, 9, 5).times != a.times);
}

TEST_CASE("occupation fractions") {
    const RegimePath half{{0.0, 0.5}, {0, 1}, 1.0};
    const auto occ = occupation_fractions(half, 1.0, 2);
    CHECK(occ[0] == 0.5);
    CHECK(occ[1] == 0.5);

    RegimeModel three{{0.1, 0.0, -0.1}, {0.1, 0.1, 0.1},
                      {-3.0, 1.0, 2.0, 0.5, -1.0, 0.5, 4.0, 4.0, -8.0}, {0.2, 0.3, 0.5}};
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const auto o = occupation_fractions(simulate_markov_chain(three, 2.5, 3, i), 2.5, 3);
        double total = 0.0;
        for (double v : o) {
            CHECK(v >= 0.0);
            total += v;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("absorbing states hold forever") {
    const RegimeModel m{{0.0, 0.0}, {0.1, 0.1}, {-50.0, 50.0, 0.0, 0.0}, {1.0, 0.0}};
    for (std::uint64_t i = 0; i < 50; ++i) {
        const RegimePath p = simulate_markov_chain(m, 10.0, 1, i);
        CHECK(p.states.back() == 1);
        CHECK(p.jumps() == 1);
    }
}

TEST_CASE("invalid generators are rejected") {
    RegimeModel bad = two_state(1.0, 0.0, 0.0, 0.1, 0.1);
    bad.generator[1] = 2.0;
    CHECK_THROWS_AS(simulate_markov_chain(bad, 1.0, 1), Error);
    RegimeModel neg = two_state(1.0, 0.0, 0.0, 0.1, 0.1);
    neg.generator = {1.0, -1.0, 1.0, -1.0};
    CHECK_THROWS_AS(simulate_markov_chain(neg, 1.0, 1), Error);
}

TEST_CASE("GBM growth has a lognormal mean") {
    const RegimeGbmBatch b = simulate_regime_gbm(single(0.08, 0.2), 1.0, 20000, 42);
    const SampleMoments s = sample_moments(b.growth);
    CHECK(std::abs(s.mean - std::exp(0.08)) <= 4.0 * s.std_error);

    const RegimeGbmBatch flat = simulate_regime_gbm(single(0.08, 1e-9), 1.0, 50, 1);
    for (double g : flat.growth) CHECK(g == doctest::Approx(std::exp(0.08)).epsilon(1e-7));
}

TEST_CASE("grid returns compound to the terminal growth") {
    const RegimeModel m = two_state(3.0, 0.2, -0.1, 0.15, 0.3);
    const RegimeGbmBatch b = simulate_regime_gbm(m, 1.5, 200, 8, 100);
    CHECK(b.grid_returns.n_steps == 150);
    for (std::size_t i = 0; i < 200; ++i) {
        double g = 1.0;
        for (double r : b.grid_returns.row(i)) g *= 1.0 + r;
        CHECK(g == doctest::Approx(b.growth[i]).epsilon(1e-12));
    }
}

TEST_CASE("regime GBM is reproducible and scheduling-free") {
    const RegimeModel m = two_state(2.0, 0.1, -0.1, 0.2, 0.3);
    const RegimeGbmBatch a = simulate_regime_gbm(m, 1.0, 500, 5, 252, {1, 500});
    const RegimeGbmBatch b = simulate_regime_gbm(m, 1.0, 500, 5, 252, {3, 17});
    CHECK(a.growth == b.growth);
    CHECK(a.grid_returns.values == b.grid_returns.values);
}

TEST_CASE("LETF paths share the benchmark randomness") {
    const RegimeModel m = two_state(4.0, 0.15, -0.2, 0.2, 0.35);
    const RegimeGbmBatch s = simulate_regime_gbm(m, 1.0, 500, 17);
    const auto l = simulate_regime_letf(m, LeverageSpec(1), 1.0, 500, 17);
    for (std::size_t i = 0; i < 500; ++i) CHECK(std::abs(l[i] - s.growth[i]) <= 1e-12 * s.growth[i]);

    const auto d = simulate_regime_letf(single(0.08, 1e-9), LeverageSpec(2), 1.0, 20, 3);
    for (double g : d) CHECK(g == doctest::Approx(std::exp(0.16)).epsilon(1e-7));
}

TEST_CASE("single-regime CE matches the closed value") {
    const RegimeCEReport r = simulate_regime_ce(single(0.08, 0.2), LeverageSpec(2), 1.0, 100000, 42);
    const double want = theory::ce_single_regime(0.08, 2, 1.0);
    CHECK(std::abs(r.moments.mean - want) <= 4.0 * r.moments.std_error);
    CHECK(r.mean_occupation[0] == 1.0);

    const auto s = simulate_regime_gbm(single(0.08, 0.2), 1.0, 1000, 6);
    const auto l = simulate_regime_letf(single(0.08, 0.2), LeverageSpec(2), 1.0, 1000, 6);
    const RegimeCEReport paired = simulate_regime_ce(single(0.08, 0.2), LeverageSpec(2), 1.0, 1000, 6);
    for (std::size_t i = 0; i < 1000; ++i)
        CHECK(paired.ce[i] == doctest::Approx((l[i] - 1.0) - 2.0 * (s.growth[i] - 1.0)).epsilon(1e-12));
}

TEST_CASE("zero drift without fees gives zero expected CE") {
    const RegimeCEReport r = simulate_regime_ce(single(0.0, 0.2), LeverageSpec(2), 1.0, 20000, 2);
    CHECK(std::abs(r.moments.mean) <= 4.0 * r.moments.std_error);
}

TEST_CASE("regime grid returns feed the generic CE estimator") {
    const RegimeModel m = single(0.1, 0.2);
    const CEReport r = monte_carlo_ce(m, LeverageSpec(2), 252, 20000, 4);
    // Daily rebalancing on a fine grid approximates continuous rebalancing.
    const double want = theory::ce_single_regime(0.1, 2, 1.0);
    CHECK(std::abs(r.mean - want) <= 4.0 * r.std_error + 2e-3);
    CHECK(r.model_tag == "regime-gbm");
}
