#pragma once

// Price ingestion, synthetic LETFs, regime-window CE tables and rolling CE.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "letf/core.hpp"

namespace letf::emp {

/// Adjusted closing prices with strictly increasing dates.
struct PricedSeries {
    std::vector<Date> dates;
    std::vector<double> prices;

    std::size_t size() const { return prices.size(); }
};

/// Reads a `date,adj_close` CSV. Rows may come in any order; the result is
/// sorted ascending. Throws data errors "malformed-row", "non-positive-price"
/// and "duplicate-date", each naming the 1-based line number.
PricedSeries load_price_csv(const std::filesystem::path& path);
PricedSeries parse_price_csv(std::istream& in, const std::string& source = "<input>");

/// P_t / P_{t-1} - 1 stamped with date t. Needs at least two prices.
ReturnSeries to_returns(const PricedSeries& prices);

struct AlignedPair {
    ReturnSeries first;
    ReturnSeries second;
};

/// Inner join on dates; throws "empty-intersection" when nothing overlaps.
AlignedPair align(const ReturnSeries& a, const ReturnSeries& b);

/// Beta-scaled replication with the daily fee; a nonzero tracking sigma is
/// rejected because the replication is deterministic.
ReturnSeries synthetic_letf(const ReturnSeries& etf, const LeverageSpec& spec);

struct RegimeWindow {
    std::string label;
    Date start;
    Date end;
};

/// The six market regimes analysed in the empirical study, with
/// month-precision bounds widened to whole months.
std::vector<RegimeWindow> default_regime_windows();

/// JSON list of {"label", "start", "end"}; bounds are "YYYY-MM" or "YYYY-MM-DD".
std::vector<RegimeWindow> parse_regime_windows(const std::string& json_text);
std::vector<RegimeWindow> load_regime_windows(const std::filesystem::path& path);

enum class TableMode { Synthetic, Realized };

const char* to_string(TableMode m);

struct CECell {
    std::optional<double> ce;  ///< empty = product not available for the window
    std::size_t n_obs = 0;
};

struct CETable {
    TableMode mode = TableMode::Synthetic;
    std::vector<RegimeWindow> windows;  ///< after clipping to the data range
    std::vector<int> betas;
    std::vector<std::vector<CECell>> cells;  ///< [window][beta]
    std::vector<std::string> warnings;
};

/// CE of each window's return slice (returns dated within [start, end]) per
/// leverage ratio. Synthetic mode replicates the benchmark; realized mode uses
/// the supplied LETF series keyed by beta, aligned to the benchmark. A
/// realized cell is absent when no series exists for that beta or the series
/// does not cover the whole window. Windows reaching past the data are
/// clipped with a warning; a window with no data throws "empty-window".
CETable regime_table(const ReturnSeries& benchmark, const std::vector<RegimeWindow>& windows,
                     const std::vector<int>& betas, TableMode mode,
                     const std::map<int, ReturnSeries>& realized = {});

/// CE over every `window`-length slice (stride 1) of a synthetic beta LETF.
std::vector<RollingPoint> rolling_ce(const ReturnSeries& benchmark, int beta, std::size_t window);

/// Realized variant: the LETF series is aligned to the benchmark first.
std::vector<RollingPoint> rolling_ce(const ReturnSeries& benchmark, const ReturnSeries& letf,
                                     int beta, std::size_t window);

}  // namespace letf::emp
