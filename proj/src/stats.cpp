#include "letf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "letf/error.hpp"

namespace letf {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

SampleMoments sample_moments(std::span<const double> xs) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    SampleMoments m{xs.size(), nan, nan, nan};
    if (xs.empty()) return m;
    CompensatedSum s;
    for (double x : xs) s.add(x);
    m.mean = s.value() / static_cast<double>(xs.size());
    if (xs.size() < 2) return m;
    CompensatedSum ss;
    for (double x : xs) ss.add((x - m.mean) * (x - m.mean));
    m.std = std::sqrt(ss.value() / static_cast<double>(xs.size() - 1));
    m.std_error = m.std / std::sqrt(static_cast<double>(xs.size()));
    return m;
}

double pooled_lag1_autocorrelation(std::span<const double> rows, std::size_t row_length) {
    if (row_length < 2 || rows.size() % row_length != 0)
        throw_config("invalid-shape", "rows must be a whole number of series of length >= 2");
    const double mean = sample_moments(rows).mean;
    CompensatedSum num, den;
    for (std::size_t r = 0; r < rows.size() / row_length; ++r) {
        const double* x = rows.data() + r * row_length;
        for (std::size_t t = 0; t < row_length; ++t) {
            den.add((x[t] - mean) * (x[t] - mean));
            if (t > 0) num.add((x[t] - mean) * (x[t - 1] - mean));
        }
    }
    return num.value() / den.value();
}

namespace {

std::vector<double> ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw_config("invalid-shape", "spearman needs two equal-length samples of size >= 2");
    const auto rx = ranks(x), ry = ranks(y);
    const double mx = sample_moments(rx).mean, my = sample_moments(ry).mean;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace letf
