#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "letf/date.hpp"

namespace letf {

/// Ordered per-period simple returns in decimal units (0.01 == 1%),
/// optionally stamped with strictly increasing dates.
///
/// Every value is > -1: a return of -100% or worse wipes out the position
/// and cannot be compounded further.
class ReturnSeries {
public:
    ReturnSeries() = default;
    explicit ReturnSeries(std::vector<double> values);
    ReturnSeries(std::vector<double> values, std::vector<Date> dates);

    std::span<const double> values() const noexcept { return values_; }
    std::span<const Date> dates() const noexcept { return dates_; }
    bool has_dates() const noexcept { return !dates_.empty(); }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Sub-range [first, first + count), keeping date stamps.
    ReturnSeries slice(std::size_t first, std::size_t count) const;

private:
    std::vector<double> values_;
    std::vector<Date> dates_;
};

/// Leverage ratio, per-period fee and tracking-error scale of an LETF.
class LeverageSpec {
public:
    explicit LeverageSpec(int beta, double fee_daily = 0.0, double tracking_sigma = 0.0);

    int beta() const noexcept { return beta_; }
    double fee_daily() const noexcept { return fee_daily_; }
    double tracking_sigma() const noexcept { return tracking_sigma_; }
    bool frictionless() const noexcept { return fee_daily_ == 0.0 && tracking_sigma_ == 0.0; }

private:
    int beta_;
    double fee_daily_;
    double tracking_sigma_;
};

struct CEResult {
    double ce = 0.0;      ///< r_letf - beta * r_etf
    double r_letf = 0.0;  ///< cumulative LETF return
    double r_etf = 0.0;   ///< cumulative benchmark return
    std::size_t n_periods = 0;
};

/// Product of (1 + x_t) minus one. Throws "empty-series" or "wipeout".
double cumulative_return(std::span<const double> returns);
double cumulative_return(const ReturnSeries& series);

/// Element-wise beta * x_t - fee + e_t. `tracking_draws` (if given) must match
/// the series length. Throws "letf-wipeout" naming the first offending index.
ReturnSeries apply_leverage(const ReturnSeries& series, const LeverageSpec& spec,
                            std::optional<std::span<const double>> tracking_draws = std::nullopt);

CEResult compounding_effect(const ReturnSeries& etf, const LeverageSpec& spec,
                            std::optional<std::span<const double>> tracking_draws = std::nullopt);

/// CE of an already-leveraged path against its benchmark; both series must be
/// the same length.
CEResult compounding_effect(const ReturnSeries& etf, const ReturnSeries& letf, int beta);

/// Realized cumulative LETF return over cumulative benchmark return.
/// Throws "degenerate-benchmark" when |R_etf| < 1e-12.
double effective_leverage(const ReturnSeries& etf, const ReturnSeries& letf);

/// Compounds consecutive non-overlapping blocks of `block` periods into one
/// return each; a trailing partial block is dropped. Dated series keep the
/// date of each block's last period.
ReturnSeries aggregate_periods(const ReturnSeries& daily, std::size_t block);

inline constexpr double kDegenerateBenchmarkTol = 1e-12;

/// One value of a sliding-window statistic, stamped at the window end.
struct RollingPoint {
    std::size_t end_index = 0;  ///< index of the last observation in the window
    std::optional<Date> date;   ///< its date, when the series is dated
    double value = 0.0;
};

}  // namespace letf
