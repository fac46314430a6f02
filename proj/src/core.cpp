#include "letf/core.hpp"

#include <cmath>
#include <string>

#include "letf/error.hpp"

namespace letf {
namespace {

std::string where(const ReturnSeries& s, std::size_t i) {
    std::string w = "index " + std::to_string(i);
    if (s.has_dates()) w += " (" + format_iso_date(s.dates()[i]) + ")";
    return w;
}

}  // namespace

ReturnSeries::ReturnSeries(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw_data("non-finite", "return at index " + std::to_string(i) + " is not finite");
        if (values_[i] <= -1.0)
            throw_data("wipeout", "return at index " + std::to_string(i) + " is <= -100%");
    }
}

ReturnSeries::ReturnSeries(std::vector<double> values, std::vector<Date> dates)
    : ReturnSeries(std::move(values)) {
    if (dates.size() != values_.size())
        throw_data("date-mismatch", "dates and values differ in length");
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(std::chrono::sys_days{dates[i - 1]} < std::chrono::sys_days{dates[i]}))
            throw_data("unsorted-dates",
                       "dates not strictly increasing at " + format_iso_date(dates[i]));
    }
    dates_ = std::move(dates);
}

ReturnSeries ReturnSeries::slice(std::size_t first, std::size_t count) const {
    if (first + count > values_.size()) throw_config("out-of-range", "slice exceeds series length");
    ReturnSeries out;
    out.values_.assign(values_.begin() + first, values_.begin() + first + count);
    if (has_dates()) out.dates_.assign(dates_.begin() + first, dates_.begin() + first + count);
    return out;
}

LeverageSpec::LeverageSpec(int beta, double fee_daily, double tracking_sigma)
    : beta_(beta), fee_daily_(fee_daily), tracking_sigma_(tracking_sigma) {
    if (beta == 0) throw_config("invalid-leverage", "leverage ratio must be nonzero");
    if (!(fee_daily >= 0.0)) throw_config("invalid-leverage", "fee must be nonnegative");
    if (!(tracking_sigma >= 0.0))
        throw_config("invalid-leverage", "tracking sigma must be nonnegative");
}

double cumulative_return(std::span<const double> returns) {
    if (returns.empty()) throw_data("empty-series", "cumulative return of an empty series");
    double gross = 1.0;
    for (std::size_t i = 0; i < returns.size(); ++i) {
        if (returns[i] <= -1.0)
            throw_data("wipeout", "return at index " + std::to_string(i) + " is <= -100%");
        gross *= 1.0 + returns[i];
    }
    return gross - 1.0;
}

double cumulative_return(const ReturnSeries& series) { return cumulative_return(series.values()); }

ReturnSeries apply_leverage(const ReturnSeries& series, const LeverageSpec& spec,
                            std::optional<std::span<const double>> tracking_draws) {
    if (tracking_draws && tracking_draws->size() != series.size())
        throw_config("noise-length", "tracking draws must match the series length");
    const double beta = spec.beta();
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        double r = beta * series[i] - spec.fee_daily();
        if (tracking_draws) r += (*tracking_draws)[i];
        if (r <= -1.0)
            throw_numerical("letf-wipeout", "leveraged return <= -100% at " + where(series, i));
        out[i] = r;
    }
    if (series.has_dates())
        return ReturnSeries(std::move(out), std::vector<Date>(series.dates().begin(), series.dates().end()));
    return ReturnSeries(std::move(out));
}

CEResult compounding_effect(const ReturnSeries& etf, const LeverageSpec& spec,
                            std::optional<std::span<const double>> tracking_draws) {
    return compounding_effect(etf, apply_leverage(etf, spec, tracking_draws), spec.beta());
}

CEResult compounding_effect(const ReturnSeries& etf, const ReturnSeries& letf, int beta) {
    if (etf.size() != letf.size())
        throw_data("length-mismatch", "benchmark and LETF series differ in length");
    CEResult r;
    r.r_etf = cumulative_return(etf);
    r.r_letf = cumulative_return(letf);
    r.ce = r.r_letf - beta * r.r_etf;
    r.n_periods = etf.size();
    return r;
}

double effective_leverage(const ReturnSeries& etf, const ReturnSeries& letf) {
    const double r_etf = cumulative_return(etf);
    if (std::abs(r_etf) < kDegenerateBenchmarkTol)
        throw_numerical("degenerate-benchmark", "benchmark cumulative return is ~0");
    return cumulative_return(letf) / r_etf;
}

ReturnSeries aggregate_periods(const ReturnSeries& daily, std::size_t block) {
    if (block < 1) throw_config("invalid-block", "block length must be >= 1");
    if (daily.size() < block) throw_config("invalid-block", "series shorter than one block");
    if (block == 1) return daily;
    const std::size_t n_blocks = daily.size() / block;
    std::vector<double> out(n_blocks);
    std::vector<Date> dates;
    if (daily.has_dates()) dates.reserve(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        double gross = 1.0;
        for (std::size_t j = 0; j < block; ++j) gross *= 1.0 + daily[b * block + j];
        out[b] = gross - 1.0;
        if (daily.has_dates()) dates.push_back(daily.dates()[b * block + block - 1]);
    }
    if (daily.has_dates()) return ReturnSeries(std::move(out), std::move(dates));
    return ReturnSeries(std::move(out));
}

}  // namespace letf
