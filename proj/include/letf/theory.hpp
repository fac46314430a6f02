#pragma once

// Analytic expressions for the expected compounding effect E[CE_n].

#include <cstddef>
#include <vector>

#include "letf/sim/models.hpp"

namespace letf::theory {

/// Exact E[CE_n] for independent returns with common mean `mu`:
///   [(1 + beta mu)^n - 1] - beta [(1 + mu)^n - 1].
/// Nonnegative for every integer beta outside {0, 1}.
/// Throws "collapse-regime" when beta * mu <= -1.
double expected_ce_iid(double mu, int beta, std::size_t n);

/// As above with a per-period fee on the leveraged leg (LETF period mean
/// beta * mu - fee).
double expected_ce_iid_with_fee(double mu, int beta, double fee, std::size_t n);

/// Exact E[CE] when i.i.d. daily returns are compounded into blocks of
/// `block` days before leverage is applied (fee accrues per day).
/// Blocks are i.i.d. with mean (1 + mu)^block - 1.
double expected_ce_iid_blocked(double mu, int beta, double fee_daily, std::size_t n_days,
                               std::size_t block);

/// Mean and uncentered lag moments gamma_k = E[X_t X_{t+k}], k = 1, 2, ...
struct AutocovSpec {
    double mu = 0.0;
    std::vector<double> gammas;
};

/// Second-order expansion of E[CE_n] for stationary returns with fee f:
///   -n f + sum_{k=1}^{n-1} (n - k) (beta (beta - 1) gamma_k - 2 beta f mu) + C(n, 2) f^2.
/// The O(n^3 M^3) remainder is dropped.
double expected_ce_autocorr(const AutocovSpec& spec, int beta, double fee, std::size_t n);

/// gamma_k = phi^k sigma^2 / (1 - phi^2) for k = 1..max_lag. Zero-mean AR(1) only.
std::vector<double> ar1_gammas(const sim::AR1Params& params, std::size_t max_lag);

/// (n-1) + (n-2) phi + ... + phi^(n-2). Positive for |phi| < 1.
double q_factor(double phi, std::size_t n);

/// (beta^2 - beta) sigma^2 / (1 - phi^2) * phi * Q(phi, n); sign equals sign(phi).
double expected_ce_ar1_approx(const sim::AR1Params& params, int beta, std::size_t n);

/// Per-regime compounding kernel exp((beta mu - f) t) - beta exp(mu t).
double phi_kernel(double mu, int beta, double fee, double t);

/// Occupation-weighted regime mixture.
struct RegimeMix {
    std::vector<double> pis;
    std::vector<double> mus;
    double t = 1.0;
    int beta = 1;
    double fee = 0.0;  ///< continuous fee rate
};

/// Occupation vectors within 1e-9 of the simplex are renormalized; anything
/// further off throws "invalid-occupation".
RegimeMix normalized(RegimeMix mix);

/// pi_j(t) = E[(1/t) * time spent in state j over [0, t]] for a chain started
/// from the model's initial distribution; equals the initial law at t = 0.
std::vector<double> expected_occupation(const sim::RegimeModel& model, double t);

/// sum_j pi_j Phi_j(t; beta, f) + (beta - 1).
double expected_ce_regime(const RegimeMix& mix);

enum class CESign { Positive, Negative, Zero };

const char* to_string(CESign s);

/// Classifies sum_j pi_j Phi_j against 1 - beta with tolerance `eps`.
CESign ce_sign_regime(const RegimeMix& mix, double eps = 1e-10);

/// Single-regime, fee-free E[CE_t] = exp(beta mu t) - beta exp(mu t) + beta - 1.
/// Throws for beta in {0, 1}.
double ce_single_regime(double mu, int beta, double t);

}  // namespace letf::theory
