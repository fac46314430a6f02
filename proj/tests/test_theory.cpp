#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "letf/error.hpp"
#include "letf/theory.hpp"
#include "oracles.hpp"

using namespace letf;
using namespace letf::theory;
using letf::sim::AR1Params;

namespace {

std::string code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

const int kBetas[] = {-3, -2, -1, 2, 3};

}  // namespace

TEST_CASE("i.i.d. expectation: boundary cases") {
    for (int beta : kBetas) {
        CHECK(expected_ce_iid(0.0, beta, 252) == 0.0);
        CHECK(expected_ce_iid(0.001, beta, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-16));
    }
    CHECK(code_of([] { expected_ce_iid(-0.4, 3, 10); }) == "collapse-regime");
    CHECK(code_of([] { expected_ce_iid(0.01, 0, 10); }) == "invalid-leverage");
}

TEST_CASE("i.i.d. expectation matches a two-point dynamic program") {
    for (int beta : kBetas) {
        for (double mu : {0.2 / 252, -0.2 / 252, 0.1 / 252}) {
            const double want = oracle::two_point_iid_ce(mu, 0.01, beta, 252);
            const double got = expected_ce_iid(mu, beta, 252);
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
            CHECK(got >= 0.0);
        }
    }
}

TEST_CASE("i.i.d. expectation is nonnegative on a grid") {
    int below = 0;
    for (int beta = -5; beta <= 5; ++beta) {
        if (beta == 0 || beta == 1) continue;
        for (int i = -20; i <= 20; ++i) {
            const double mu = 0.002 * i / 20.0;
            for (std::size_t n = 1; n <= 504; ++n) {
                const double v = expected_ce_iid(mu, beta, n);
                if (v < -1e-12) ++below;
                if (i == 0 || n == 1) CHECK(std::abs(v) <= 1e-15);
            }
        }
    }
    CHECK(below == 0);
}

TEST_CASE("blocked i.i.d. expectation") {
    CHECK(expected_ce_iid_blocked(0.0005, 2, 0.0, 252, 1) == expected_ce_iid(0.0005, 2, 252));
    const double m5 = std::pow(1.0005, 5) - 1.0;
    CHECK(expected_ce_iid_blocked(0.0005, 2, 0.0, 252, 5) ==
          doctest::Approx(std::pow(1 + 2 * m5, 50) - 1 - 2 * (std::pow(1 + m5, 50) - 1)).epsilon(1e-12));
}

TEST_CASE("autocorrelation expansion: worked values") {
    const AutocovSpec zero{0.0, std::vector<double>(20, 0.0)};
    for (int beta : kBetas) CHECK(expected_ce_autocorr(zero, beta, 0.0, 20) == 0.0);
    CHECK(expected_ce_autocorr(zero, 2, 0.0001, 10) == doctest::Approx(-0.00099955).epsilon(1e-12));
    const AutocovSpec one{0.0, {5e-5, 0.0}};
    CHECK(expected_ce_autocorr(one, 2, 0.0, 3) == doctest::Approx(2e-4).epsilon(1e-12));
    CHECK(code_of([&] { expected_ce_autocorr(one, 2, 0.0, 5); }) == "insufficient-gammas");
}

TEST_CASE("autocorrelation expansion against exact Markov-chain expectations") {
    const double M = 0.01;
    const oracle::TwoStateChain chains[] = {
        {M, -M, 0.5, 0.5},  // i.i.d.
        {M, -M, 0.8, 0.8},  // momentum
        {M, -M, 0.2, 0.2},  // mean reversion
        {M, -M, 0.7, 0.4},  // asymmetric, nonzero mean
    };
    for (const auto& chain : chains) {
        for (double fee : {0.0, 1e-4}) {
            for (int beta : kBetas) {
                for (std::size_t n = 2; n <= 8; ++n) {
                    const AutocovSpec spec{chain.mean(), chain.gammas(n - 1)};
                    const double approx = expected_ce_autocorr(spec, beta, fee, n);
                    const double exact = chain.exact_ce(beta, fee, n);
                    const double bound = 10.0 * std::pow(static_cast<double>(n), 3) * M * M * M;
                    CAPTURE(n);
                    CAPTURE(beta);
                    CHECK(std::abs(approx - exact) <= bound);
                }
            }
        }
    }
}

TEST_CASE("AR(1) lag moments") {
    for (double g : ar1_gammas({0.0, 0.01, 0.0}, 10)) CHECK(g == 0.0);
    const auto g = ar1_gammas({0.5, 0.01, 0.0}, 1);
    CHECK(g[0] == doctest::Approx(0.5e-4 / 0.75).epsilon(1e-14));
    const auto h = ar1_gammas({-0.5, 0.01, 0.0}, 2);
    CHECK(h[0] < 0.0);
    CHECK(h[1] == doctest::Approx(0.25e-4 / 0.75).epsilon(1e-14));
    CHECK(code_of([] { ar1_gammas({0.5, 0.01, 0.001}, 3); }) == "zero-mean-only");
}

TEST_CASE("Q factor") {
    CHECK(q_factor(0.0, 5) == 4.0);
    CHECK(q_factor(0.999999, 4) == doctest::Approx(6.0).epsilon(1e-5));
    CHECK(q_factor(-0.5, 4) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(code_of([] { q_factor(0.5, 1); }) == "invalid-horizon");
    for (int i = -99; i <= 99; ++i)
        for (std::size_t n = 2; n <= 300; n += 7) CHECK(q_factor(i / 100.0, n) > 0.0);
}

TEST_CASE("AR(1) approximation") {
    CHECK(expected_ce_ar1_approx({0.0, 0.01, 0.0}, 2, 100) == 0.0);
    CHECK(expected_ce_ar1_approx({0.3, 0.01, 0.0}, 2, 3) ==
          doctest::Approx(2.0 * (1e-4 / 0.91) * 0.3 * 2.3).epsilon(1e-13));
    for (int beta : kBetas)
        for (double phi : {-0.9, -0.3, -0.01, 0.01, 0.3, 0.9})
            for (std::size_t n : {2u, 3u, 50u, 252u}) {
                const double v = expected_ce_ar1_approx({phi, 0.01, 0.0}, beta, n);
                CHECK((v > 0.0) == (phi > 0.0));
            }
}

TEST_CASE("AR(1) approximation equals the general expansion with AR(1) moments") {
    std::mt19937_64 g(2024);
    std::uniform_real_distribution<double> phi_d(-0.9, 0.9), sig_d(0.002, 0.03);
    std::uniform_int_distribution<int> n_d(2, 1000), b_d(0, 4);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const AR1Params p{phi_d(g), sig_d(g), 0.0};
        const int beta = kBetas[b_d(g)];
        const std::size_t n = static_cast<std::size_t>(n_d(g));
        const double a = expected_ce_ar1_approx(p, beta, n);
        const double b = expected_ce_autocorr({0.0, ar1_gammas(p, n - 1)}, beta, 0.0, n);
        worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("regime kernel") {
    for (int beta : kBetas) {
        CHECK(phi_kernel(0.0, beta, 0.0, 1.7) == doctest::Approx(1.0 - beta));
        CHECK(phi_kernel(0.3, beta, 0.01, 0.0) == doctest::Approx(1.0 - beta));
    }
    CHECK(phi_kernel(0.08, 2, 0.0, 1.0) == doctest::Approx(std::exp(0.16) - 2 * std::exp(0.08)).epsilon(1e-15));
    CHECK(phi_kernel(0.08, 2, 0.0, 1.0) == doctest::Approx(-0.993063264358107).epsilon(1e-12));
}

TEST_CASE("regime mixture") {
    const double single = expected_ce_regime({{1.0}, {0.08}, 1.0, 2, 0.0});
    CHECK(single == doctest::Approx(std::exp(0.16) - 2 * std::exp(0.08) + 1).epsilon(1e-12));
    CHECK(single == doctest::Approx(0.00693673564189301).epsilon(1e-10));
    CHECK(expected_ce_regime({{0.2, 0.3, 0.5}, {0.0, 0.0, 0.0}, 2.0, 3, 0.0}) == 0.0);
    const double mix = expected_ce_regime({{0.5, 0.5}, {0.1, -0.1}, 1.0, 2, 0.0});
    CHECK(mix == doctest::Approx(0.5 * (std::exp(0.2) - 2 * std::exp(0.1)) +
                                 0.5 * (std::exp(-0.2) - 2 * std::exp(-0.1)) + 1)
                     .epsilon(1e-12));
    CHECK(mix == doctest::Approx(0.010058419507468885).epsilon(1e-10));

    const RegimeMix near{{0.5 + 4e-10, 0.5}, {0.1, -0.1}, 1.0, 2, 0.0};
    CHECK(expected_ce_regime(near) == doctest::Approx(mix).epsilon(1e-8));
    CHECK(code_of([] { expected_ce_regime({{0.6, 0.5}, {0.1, -0.1}, 1.0, 2, 0.0}); }) ==
          "invalid-occupation");
    CHECK(code_of([] { expected_ce_regime({{1.2, -0.2}, {0.1, -0.1}, 1.0, 2, 0.0}); }) ==
          "invalid-occupation");
}

TEST_CASE("sign classification") {
    CHECK(ce_sign_regime({{1.0}, {0.08}, 1.0, 2, 0.0}) == CESign::Positive);
    CHECK(ce_sign_regime({{0.5, 0.5}, {0.0, 0.0}, 1.0, 2, 0.0}) == CESign::Zero);
    CHECK(ce_sign_regime({{1.0}, {0.05}, 1.0, 2, 0.5}) == CESign::Negative);
    CHECK(std::exp(-0.4) - 2 * std::exp(0.05) + 1 < 0.0);
}

TEST_CASE("single-regime closed value") {
    for (int beta : kBetas) {
        CHECK(ce_single_regime(0.3, beta, 0.0) == 0.0);
        CHECK(ce_single_regime(0.0, beta, 2.0) == 0.0);
    }
    CHECK(ce_single_regime(-0.1, -2, 1.0) == doctest::Approx(std::exp(0.2) + 2 * std::exp(-0.1) - 3).epsilon(1e-12));
    CHECK(ce_single_regime(-0.1, -2, 1.0) == doctest::Approx(0.031077594232089112).epsilon(1e-10));
    CHECK(code_of([] { ce_single_regime(0.1, 1, 1.0); }) == "invalid-leverage");
    CHECK(code_of([] { ce_single_regime(0.1, 0, 1.0); }) == "invalid-leverage");

    int below = 0;
    for (int beta : kBetas)
        for (int i = -50; i <= 50; ++i)
            for (int k = 0; k <= 50; ++k)
                if (ce_single_regime(i / 100.0, beta, k / 10.0) < -1e-12) ++below;
    CHECK(below == 0);
}

TEST_CASE("expected occupation of a two-state chain") {
    // P(Z_s = 0) relaxes to b / (a + b) at rate a + b.
    for (double a : {0.1, 2.0, 15.0}) {
        for (double b : {0.3, 4.0}) {
            for (double p0 : {0.0, 0.5, 1.0}) {
                const sim::RegimeModel m{{0.1, -0.1}, {0.2, 0.2}, {-a, a, b, -b}, {p0, 1.0 - p0}};
                for (double t : {0.25, 1.0, 3.0}) {
                    const double stat = b / (a + b);
                    const double k = a + b;
                    const double want = stat + (p0 - stat) * (1.0 - std::exp(-k * t)) / (k * t);
                    const auto pi = expected_occupation(m, t);
                    CHECK(pi[0] == doctest::Approx(want).epsilon(1e-12));
                    CHECK(pi[0] + pi[1] == doctest::Approx(1.0).epsilon(1e-12));
                }
            }
        }
    }
    const sim::RegimeModel m{{0.1, -0.1}, {0.2, 0.2}, {-1, 1, 1, -1}, {0.3, 0.7}};
    CHECK(expected_occupation(m, 0.0) == std::vector<double>{0.3, 0.7});
}

TEST_CASE("expected occupation: absorbing and three-state chains") {
    const sim::RegimeModel stuck{{0.1, 0.2, 0.3}, {0.1, 0.1, 0.1}, std::vector<double>(9, 0.0), {0.2, 0.3, 0.5}};
    const auto pi = expected_occupation(stuck, 2.0);
    CHECK(pi[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(pi[2] == doctest::Approx(0.5).epsilon(1e-14));
    const sim::RegimeModel three{{0.1, -0.1, 0.0}, {0.1, 0.2, 0.3}, {-3, 1, 2, 0.5, -1, 0.5, 4, 4, -8}, {1, 0, 0}};
    double total = 0.0;
    for (double p : expected_occupation(three, 1.7)) {
        CHECK(p > 0.0);
        total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}
