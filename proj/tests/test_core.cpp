#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "letf/core.hpp"
#include "letf/error.hpp"

using namespace letf;
using namespace std::chrono;

namespace {

std::string code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

std::vector<double> random_returns(std::mt19937_64& g, std::size_t n, double scale) {
    std::normal_distribution<double> d(0.0, scale);
    std::vector<double> v(n);
    for (double& x : v) x = std::clamp(d(g), -0.3, 0.3);
    return v;
}

}  // namespace

TEST_CASE("cumulative return") {
    CHECK(cumulative_return(ReturnSeries({0.06, -0.04})) == doctest::Approx(0.0176).epsilon(1e-14));
    CHECK(cumulative_return(ReturnSeries({0.0})) == 0.0);
    CHECK(cumulative_return(ReturnSeries(std::vector<double>(5, 0.01))) ==
          doctest::Approx(0.0510100501).epsilon(1e-12));
    CHECK(code_of([] { cumulative_return(ReturnSeries{}); }) == "empty-series");
    const std::vector<double> bad{0.1, -1.0};
    CHECK(code_of([&] { cumulative_return(std::span<const double>(bad)); }) == "wipeout");
}

TEST_CASE("return series validation") {
    CHECK(code_of([] { ReturnSeries({0.1, -1.5}); }) == "wipeout");
    CHECK(code_of([] { ReturnSeries({0.1, NAN}); }) == "non-finite");
    const Date d1 = year{2020} / 1 / 2, d2 = year{2020} / 1 / 3;
    CHECK(code_of([&] { ReturnSeries({0.1, 0.2}, {d2, d1}); }) == "unsorted-dates");
    CHECK(code_of([&] { ReturnSeries({0.1, 0.2}, {d1}); }) == "date-mismatch");
    const ReturnSeries s({0.1, 0.2}, {d1, d2});
    const ReturnSeries tail = s.slice(1, 1);
    CHECK(tail.size() == 1);
    CHECK(tail[0] == 0.2);
    CHECK(tail.dates()[0] == d2);
}

TEST_CASE("leverage spec validation") {
    CHECK(code_of([] { LeverageSpec(0); }) == "invalid-leverage");
    CHECK(code_of([] { LeverageSpec(2, -0.1); }) == "invalid-leverage");
    CHECK(code_of([] { LeverageSpec(2, 0.0, -1.0); }) == "invalid-leverage");
    CHECK(LeverageSpec(2).frictionless());
}

TEST_CASE("apply leverage") {
    const ReturnSeries two = apply_leverage(ReturnSeries({0.06, -0.04}), LeverageSpec(2));
    CHECK(two[0] == doctest::Approx(0.12).epsilon(1e-15));
    CHECK(two[1] == doctest::Approx(-0.08).epsilon(1e-15));

    const ReturnSeries s({0.013, -0.021, 0.004});
    const ReturnSeries same = apply_leverage(s, LeverageSpec(1));
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(same[i] == s[i]);

    const std::vector<double> noise{0.0005};
    const ReturnSeries r = apply_leverage(ReturnSeries({0.01}), LeverageSpec(3, 0.0001), noise);
    CHECK(r[0] == doctest::Approx(0.0304).epsilon(1e-13));

    const std::vector<double> short_noise{0.0, 0.0};
    CHECK(code_of([&] { apply_leverage(ReturnSeries({0.01}), LeverageSpec(2), short_noise); }) ==
          "noise-length");
    CHECK(code_of([] { apply_leverage(ReturnSeries({0.01, 0.4}), LeverageSpec(-3)); }) ==
          "letf-wipeout");
}

TEST_CASE("compounding effect: worked two-day example") {
    const ReturnSeries etf({0.06, -0.04});
    const CEResult r = compounding_effect(etf, LeverageSpec(2));
    CHECK(std::abs(r.r_etf - 0.0176) < 1e-12);
    CHECK(std::abs(r.r_letf - 0.0304) < 1e-12);
    CHECK(std::abs(r.ce - (-0.0048)) < 1e-12);
    CHECK(r.n_periods == 2);
    const ReturnSeries letf = apply_leverage(etf, LeverageSpec(2));
    CHECK(effective_leverage(etf, letf) == doctest::Approx(1.7273).epsilon(1e-4));
}

TEST_CASE("effective leverage") {
    const ReturnSeries s({0.01, 0.01});
    CHECK(effective_leverage(s, s) == doctest::Approx(1.0));
    CHECK(effective_leverage(s, apply_leverage(s, LeverageSpec(3))) ==
          doctest::Approx((1.03 * 1.03 - 1) / (1.01 * 1.01 - 1)).epsilon(1e-12));
    const ReturnSeries flat({0.1, -1.0 / 11.0});
    CHECK(code_of([&] { effective_leverage(flat, flat); }) == "degenerate-benchmark");
}

TEST_CASE("compounding effect from two series") {
    const ReturnSeries etf({0.02, -0.01, 0.03});
    const ReturnSeries letf = apply_leverage(etf, LeverageSpec(3));
    const CEResult a = compounding_effect(etf, letf, 3);
    const CEResult b = compounding_effect(etf, LeverageSpec(3));
    CHECK(a.ce == b.ce);
    CHECK(code_of([&] { compounding_effect(etf, ReturnSeries({0.01}), 2); }) == "length-mismatch");
}

TEST_CASE("aggregate periods") {
    const ReturnSeries a = aggregate_periods(ReturnSeries({0.01, 0.02, 0.03, 0.04}), 2);
    REQUIRE(a.size() == 2);
    CHECK(a[0] == doctest::Approx(0.0302).epsilon(1e-14));
    CHECK(a[1] == doctest::Approx(0.0712).epsilon(1e-14));
    const ReturnSeries b = aggregate_periods(ReturnSeries({0.1, -0.1, 0.05}), 2);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == doctest::Approx(-0.01).epsilon(1e-14));
    const ReturnSeries s({0.01, -0.02, 0.03});
    const ReturnSeries id = aggregate_periods(s, 1);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(id[i] == s[i]);
    CHECK(code_of([&] { aggregate_periods(s, 0); }) == "invalid-block");

    const Date d0 = year{2021} / 3 / 1;
    std::vector<Date> dates;
    for (int i = 0; i < 4; ++i) dates.push_back(sys_days(d0) + days(i));
    const ReturnSeries dated({0.01, 0.02, 0.03, 0.04}, dates);
    const ReturnSeries ad = aggregate_periods(dated, 2);
    CHECK(ad.dates()[0] == dates[1]);
    CHECK(ad.dates()[1] == dates[3]);
}

TEST_CASE("pathwise properties on random series") {
    std::mt19937_64 g(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 60;
        const ReturnSeries s(random_returns(g, n, 0.02));
        // beta = 1 without frictions: CE vanishes identically.
        CHECK(std::abs(compounding_effect(s, LeverageSpec(1)).ce) <= 1e-12);
        // One-period CE is zero for every beta.
        for (int beta : {-3, -2, -1, 2, 3}) {
            const CEResult one = compounding_effect(s.slice(0, 1), LeverageSpec(beta));
            CHECK(std::abs(one.ce) <= 1e-12);
            const CEResult r = compounding_effect(s, LeverageSpec(beta));
            // Portfolio long the LETF and short beta units of the ETF earns CE.
            CHECK(std::abs((r.r_letf - beta * r.r_etf) - r.ce) <= 1e-12);
        }
        for (std::size_t k : {1u, 2u, 5u}) {
            if (k > n) continue;
            const double whole = cumulative_return(s.slice(0, (n / k) * k));
            CHECK(std::abs(cumulative_return(aggregate_periods(s, k)) - whole) <= 1e-12);
        }
    }
}

TEST_CASE("nonnegative returns give nonnegative CE for beta >= 2") {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(0.0, 0.05);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(1 + trial % 40);
        for (double& x : v) x = u(g);
        for (int beta : {2, 3, 4}) CHECK(compounding_effect(ReturnSeries(v), LeverageSpec(beta)).ce >= -1e-12);
    }
}
