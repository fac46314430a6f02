#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "letf/error.hpp"
#include "letf/estimation.hpp"
#include "letf/optimize.hpp"
#include "letf/sim/simulate.hpp"
#include "letf/stats.hpp"

using namespace letf;
using namespace letf::est;
using letf::sim::ArGarchParams;

namespace {

const ArGarchParams kSpy{0.0918, -0.0490, 0.0357, 0.1747, 0.7969};

std::vector<double> ar1_path(double phi, std::size_t n, std::uint64_t seed) {
    const sim::PathBatch b = sim::simulate_ar1({phi, 0.01, 0.0}, n, 1, seed);
    return b.values;
}

std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    return sim::simulate_iid({0.0, sigma}, n, 1, seed).values;
}

std::vector<Date> business_days(std::size_t n) {
    using namespace std::chrono;
    std::vector<Date> d;
    sys_days day = sys_days(year{2010} / 1 / 4);
    while (d.size() < n) {
        const weekday w{day};
        if (w != Saturday && w != Sunday) d.push_back(Date(day));
        day += days(1);
    }
    return d;
}

std::string code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("AR(1) least squares") {
    const auto x = ar1_path(0.5, 10000, 42);
    const Ar1Fit f = estimate_ar1(x);
    CHECK(std::abs(f.params.phi - 0.5) <= 3.0 * f.phi_se);
    CHECK(f.params.sigma_eps == doctest::Approx(0.01).epsilon(0.03));
    CHECK(f.n_obs == 9999);

    const auto w = white_noise(10000, 7);
    const Ar1Fit g = estimate_ar1(w);
    CHECK(std::abs(g.params.phi) <= 3.0 * g.phi_se);

    const std::vector<double> flat(100, 0.003);
    CHECK(code_of([&] { estimate_ar1(flat); }) == "constant-series");
    CHECK(code_of([&] { estimate_ar1(std::vector<double>(10, 0.1)); }) == "insufficient-data");
}

TEST_CASE("AR(1) least squares on an exact line") {
    std::vector<double> x{0.01};
    for (int t = 1; t < 40; ++t) x.push_back(0.002 + 0.3 * x.back() + (t % 2 ? 1e-3 : -1e-3) * 0.0);
    // Deterministic recursion converges, so add a fixed perturbation pattern.
    for (std::size_t t = 0; t < x.size(); ++t) x[t] += 1e-3 * std::sin(0.7 * static_cast<double>(t));
    const Ar1Fit f = estimate_ar1(x);
    CHECK(std::isfinite(f.params.phi));
    CHECK(f.phi_se > 0.0);
}

TEST_CASE("GARCH filter without ARCH terms") {
    const auto x = white_noise(500, 3);
    const GarchFiltered f = garch_filter({0.0, 0.0, 0.7, 0.0, 0.0}, x);
    CHECK(f.residuals.size() == 499);
    for (double h : f.variances) CHECK(h == 0.7);
}

TEST_CASE("GARCH filter with zero residuals converges geometrically") {
    const std::vector<double> x(200, 0.0);
    const GarchFiltered f = garch_filter({0.0, 0.0, 0.0357, 0.1747, 0.7969}, x);
    const double fixed = 0.0357 / (1.0 - 0.7969);
    CHECK(f.variances[0] == doctest::Approx(0.0357));
    for (std::size_t t = 1; t < f.variances.size(); ++t) {
        CHECK(f.variances[t] >= f.variances[t - 1]);
        CHECK(fixed - f.variances[t] == doctest::Approx(0.7969 * (fixed - f.variances[t - 1])).epsilon(1e-9));
    }
    CHECK(f.variances.back() == doctest::Approx(fixed).epsilon(1e-12));
}

TEST_CASE("filtering a simulated path recovers its variances") {
    const sim::GarchPath p = sim::simulate_ar1_garch_path(kSpy, 3000, 42, 0);
    const GarchFiltered f = garch_filter(kSpy, p.returns);
    for (std::size_t t = 250; t < f.variances.size(); ++t)
        CHECK(std::abs(f.variances[t] - p.variances[t + 1]) <= 1e-10);
    for (double h : f.variances) CHECK(h >= kSpy.omega);
}

TEST_CASE("likelihood without dynamics is the i.i.d. Gaussian likelihood") {
    const auto x = white_noise(1000, 5, 1.3);
    const double omega = 1.7;
    double direct = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t)
        direct += 0.5 * (std::log(2.0 * std::numbers::pi * omega) + x[t] * x[t] / omega);
    CHECK(garch_neg_loglik({0.0, 0.0, omega, 0.0, 0.0}, x) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("likelihood scale identity") {
    const sim::GarchPath p = sim::simulate_ar1_garch_path(kSpy, 2000, 9, 0);
    std::vector<double> twice(p.returns);
    for (double& v : twice) v *= 2.0;
    const ArGarchParams q{kSpy.mu * 2.0, kSpy.phi, kSpy.omega * 4.0, kSpy.alpha, kSpy.beta_g};
    const double shift = garch_neg_loglik(q, twice) - garch_neg_loglik(kSpy, p.returns);
    CHECK(std::abs(shift - static_cast<double>(p.returns.size() - 1) * std::log(2.0)) <= 1e-6);
}

TEST_CASE("likelihood prefers the true parameters") {
    const sim::GarchPath p = sim::simulate_ar1_garch_path(kSpy, 20000, 11, 0);
    ArGarchParams bumped = kSpy;
    bumped.omega *= 1.5;
    CHECK(garch_neg_loglik(kSpy, p.returns) < garch_neg_loglik(bumped, p.returns));
}

TEST_CASE("likelihood errors") {
    const std::vector<double> x{0.0, 1e308, -1e308, 1e308};
    CHECK(code_of([&] { garch_neg_loglik({0.0, 0.0, 1.0, 0.5, 0.4}, x); }) == "numerical-overflow");
    CHECK(code_of([&] { garch_neg_loglik({0.0, 0.0, -1.0, 0.1, 0.1}, x); }) == "invalid-params");
}

TEST_CASE("analytic gradient matches finite differences") {
    const sim::GarchPath p = sim::simulate_ar1_garch_path(kSpy, 1500, 13, 0);
    const ArGarchParams at{0.07, 0.05, 0.05, 0.12, 0.8};
    std::array<double, 5> g{};
    const double f0 = garch_nll_gradient(at, p.returns, g);
    CHECK(f0 == doctest::Approx(garch_neg_loglik(at, p.returns)).epsilon(1e-14));
    const std::array<double, 5> theta{at.mu, at.phi, at.omega, at.alpha, at.beta_g};
    for (int j = 0; j < 5; ++j) {
        const double h = 1e-6;
        auto up = theta, dn = theta;
        up[j] += h;
        dn[j] -= h;
        std::array<double, 5> scratch{};
        const double fu = garch_nll_gradient({up[0], up[1], up[2], up[3], up[4]}, p.returns, scratch);
        const double fd = garch_nll_gradient({dn[0], dn[1], dn[2], dn[3], dn[4]}, p.returns, scratch);
        CAPTURE(j);
        CHECK(g[j] == doctest::Approx((fu - fd) / (2 * h)).epsilon(1e-5));
    }
}

TEST_CASE("BFGS minimizes a Rosenbrock valley") {
    const opt::Objective rosen = [](std::span<const double> x, std::span<double> g) {
        const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
        g[0] = -2.0 * a - 400.0 * x[0] * b;
        g[1] = 200.0 * b;
        return a * a + 100.0 * b * b;
    };
    const opt::BfgsResult r = opt::minimize_bfgs(rosen, {-1.2, 1.0}, {1000, 1e-10, 60});
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("initial point") {
    const sim::GarchPath p = sim::simulate_ar1_garch_path(kSpy, 5000, 17, 0);
    const ArGarchParams s = garch_initial_point(p.returns);
    CHECK(s.alpha == 0.1);
    CHECK(s.beta_g == 0.8);
    CHECK(s.omega > 0.0);
    CHECK(s.mu == doctest::Approx(sample_moments(p.returns).mean));
}

TEST_CASE("GARCH fit recovers simulated parameters") {
    const sim::GarchPath p = sim::simulate_ar1_garch_path(kSpy, 50000, 42, 0);
    const GarchFit fit = fit_ar1_garch_scaled(p.returns);
    REQUIRE(fit.converged);
    const double truth[5] = {kSpy.mu, kSpy.phi, kSpy.omega, kSpy.alpha, kSpy.beta_g};
    const double got[5] = {fit.params.mu, fit.params.phi, fit.params.omega, fit.params.alpha,
                           fit.params.beta_g};
    for (int i = 0; i < 5; ++i) {
        CAPTURE(kGarchParamNames[i]);
        CHECK(fit.std_errors[i] > 0.0);
        CHECK(std::abs(got[i] - truth[i]) <= 3.0 * fit.std_errors[i]);
    }
    CHECK(-fit.loglik <= fit.start_nll);
    CHECK(fit.n_obs == 49999);
    sim::validate(fit.params);
}

TEST_CASE("GARCH fit on a decimal series converts to percent") {
    const sim::GarchPath p = sim::simulate_ar1_garch_path(kSpy, 4000, 5, 0);
    std::vector<double> dec(p.returns);
    for (double& v : dec) v /= 100.0;
    const GarchFit a = fit_ar1_garch(ReturnSeries(dec));
    const GarchFit b = fit_ar1_garch_scaled(p.returns);
    CHECK(a.scale == ReturnScale::Percent);
    CHECK(a.params.omega == doctest::Approx(b.params.omega).epsilon(1e-6));
    CHECK(a.loglik == doctest::Approx(b.loglik).epsilon(1e-9));
}

TEST_CASE("GARCH fit on i.i.d. data finds no ARCH effect") {
    const auto x = white_noise(10000, 21);
    const GarchFit fit = fit_ar1_garch_scaled(x);
    MESSAGE("iid fit: alpha=" << fit.params.alpha << " beta=" << fit.params.beta_g
                              << " converged=" << fit.converged);
    CHECK(fit.params.alpha <= 0.05);
    CHECK(fit.params.omega / (1.0 - fit.params.alpha - fit.params.beta_g) ==
          doctest::Approx(1.0).epsilon(0.05));
    sim::validate(fit.params);
}

TEST_CASE("rolling AR(1)") {
    const auto x = ar1_path(0.4, 1500, 8);
    const ReturnSeries s(x, business_days(x.size()));
    const auto roll = rolling_ar1(s, 120);
    CHECK(roll.size() == x.size() - 120 + 1);
    double mean = 0.0;
    for (const auto& r : roll) mean += r.value;
    mean /= static_cast<double>(roll.size());
    CHECK(std::abs(mean - 0.4) <= 0.05);
    CHECK(roll.front().end_index == 119);
    CHECK(*roll.back().date == s.dates().back());

    const auto whole = rolling_ar1(s, s.size());
    REQUIRE(whole.size() == 1);
    CHECK(whole[0].value == estimate_ar1(x).params.phi);
    CHECK(code_of([&] { rolling_ar1(s, s.size() + 1); }) == "window-too-large");
}
