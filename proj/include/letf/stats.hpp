#pragma once

#include <cstddef>
#include <span>

namespace letf {

/// Neumaier-compensated running sum; the result is insensitive to summation
/// order up to a few ulps of the total.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct SampleMoments {
    std::size_t n = 0;
    double mean = 0.0;
    double std = 0.0;     ///< sample standard deviation (n - 1 denominator)
    double std_error = 0.0;  ///< std / sqrt(n)
};

/// Mean is NaN for an empty sample; std and std_error need two values.
SampleMoments sample_moments(std::span<const double> xs);

/// Pooled lag-1 sample autocorrelation of a row-major matrix of series,
/// each row demeaned by the pooled mean.
double pooled_lag1_autocorrelation(std::span<const double> rows, std::size_t row_length);

/// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace letf
