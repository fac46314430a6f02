#include "letf/empirical.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "letf/error.hpp"

namespace letf::emp {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_row(const std::string& code, const std::string& source, std::size_t line,
                          const std::string& what) {
    throw_data(code, source + " line " + std::to_string(line) + ": " + what);
}

void require_dated(const ReturnSeries& s, const char* what) {
    if (!s.has_dates() && !s.empty()) throw_config("undated-series", std::string(what) + " must be dated");
}

// Index range [first, last) of entries dated within [start, end].
std::pair<std::size_t, std::size_t> date_range(std::span<const Date> dates, Date start, Date end) {
    const auto lo = std::lower_bound(dates.begin(), dates.end(), start);
    const auto hi = std::upper_bound(dates.begin(), dates.end(), end);
    return {static_cast<std::size_t>(lo - dates.begin()),
            static_cast<std::size_t>(std::max(lo, hi) - dates.begin())};
}

}  // namespace

PricedSeries parse_price_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<std::pair<Date, double>> rows;
    std::vector<std::size_t> row_lines;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        if (!header) {
            if (text != "date,adj_close")
                bad_row("malformed-header", source, line_no, "expected header 'date,adj_close'");
            header = true;
            continue;
        }
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos)
            bad_row("malformed-row", source, line_no, "expected two comma-separated fields");
        const auto date = parse_iso_date(trim(text.substr(0, comma)));
        if (!date) bad_row("malformed-row", source, line_no, "invalid ISO date");
        const std::string_view num = trim(text.substr(comma + 1));
        double price = 0.0;
        const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), price);
        if (ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(price))
            bad_row("malformed-row", source, line_no, "invalid price");
        if (!(price > 0.0)) bad_row("non-positive-price", source, line_no, "price must be > 0");
        rows.emplace_back(*date, price);
        row_lines.push_back(line_no);
    }
    if (!header) throw_data("malformed-header", source + ": missing header 'date,adj_close'");

    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rows[a].first < rows[b].first; });
    PricedSeries out;
    out.dates.reserve(rows.size());
    out.prices.reserve(rows.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        const auto& [d, p] = rows[order[k]];
        if (k > 0 && d == out.dates.back())
            bad_row("duplicate-date", source, std::max(row_lines[order[k]], row_lines[order[k - 1]]),
                    "duplicate date " + format_iso_date(d));
        out.dates.push_back(d);
        out.prices.push_back(p);
    }
    return out;
}

PricedSeries load_price_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_data("file-not-found", "cannot open " + path.string());
    return parse_price_csv(in, path.string());
}

ReturnSeries to_returns(const PricedSeries& prices) {
    if (prices.size() < 2) throw_data("insufficient-data", "need at least two prices for returns");
    std::vector<double> r(prices.size() - 1);
    for (std::size_t t = 1; t < prices.size(); ++t) r[t - 1] = prices.prices[t] / prices.prices[t - 1] - 1.0;
    return ReturnSeries(std::move(r), std::vector<Date>(prices.dates.begin() + 1, prices.dates.end()));
}

AlignedPair align(const ReturnSeries& a, const ReturnSeries& b) {
    require_dated(a, "aligned series");
    require_dated(b, "aligned series");
    std::vector<double> va, vb;
    std::vector<Date> dates;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a.dates()[i] < b.dates()[j]) {
            ++i;
        } else if (b.dates()[j] < a.dates()[i]) {
            ++j;
        } else {
            dates.push_back(a.dates()[i]);
            va.push_back(a[i++]);
            vb.push_back(b[j++]);
        }
    }
    if (dates.empty()) throw_data("empty-intersection", "series share no dates");
    return {ReturnSeries(std::move(va), dates), ReturnSeries(std::move(vb), dates)};
}

ReturnSeries synthetic_letf(const ReturnSeries& etf, const LeverageSpec& spec) {
    if (spec.tracking_sigma() > 0.0)
        throw_config("tracking-unsupported", "synthetic replication is deterministic; tracking sigma must be 0");
    return apply_leverage(etf, spec);
}

std::vector<RegimeWindow> default_regime_windows() {
    const auto w = [](const char* label, const char* start, const char* end) {
        return RegimeWindow{label, *parse_period_start(start), *parse_period_end(end)};
    };
    return {w("Financial Crisis", "2007-10", "2009-03"),
            w("Post-Crisis Recovery", "2009-04", "2013-03"),
            w("Sideways Market", "2014-02", "2015-09"),
            w("COVID-19 Pandemic", "2020-02", "2020-03"),
            w("Post-COVID Recovery", "2020-04", "2021-12"),
            w("2022 Bear Market", "2022-01", "2022-12")};
}

std::vector<RegimeWindow> parse_regime_windows(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw_config("invalid-regimes", std::string("regime config is not valid JSON: ") + e.what());
    }
    if (!j.is_array()) throw_config("invalid-regimes", "regime config must be a JSON list");
    std::vector<RegimeWindow> out;
    for (const auto& item : j) {
        if (!item.is_object() || !item.contains("label") || !item.contains("start") || !item.contains("end") ||
            !item["label"].is_string() || !item["start"].is_string() || !item["end"].is_string())
            throw_config("invalid-regimes", "each regime needs string fields label, start, end");
        const auto start = parse_period_start(item["start"].get<std::string>());
        const auto end = parse_period_end(item["end"].get<std::string>());
        const std::string label = item["label"].get<std::string>();
        if (!start || !end) throw_config("invalid-regimes", "bad date in regime '" + label + "'");
        if (!(*start < *end)) throw_config("invalid-regimes", "regime '" + label + "' must have start < end");
        out.push_back({label, *start, *end});
    }
    return out;
}

std::vector<RegimeWindow> load_regime_windows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_config("file-not-found", "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_regime_windows(ss.str());
}

const char* to_string(TableMode m) { return m == TableMode::Synthetic ? "synthetic" : "realized"; }

CETable regime_table(const ReturnSeries& benchmark, const std::vector<RegimeWindow>& windows,
                     const std::vector<int>& betas, TableMode mode,
                     const std::map<int, ReturnSeries>& realized) {
    require_dated(benchmark, "benchmark");
    if (benchmark.empty()) throw_data("empty-series", "benchmark has no returns");
    for (int b : betas)
        if (b == 0) throw_config("invalid-leverage", "leverage ratio must be nonzero");
    for (const auto& [b, s] : realized) require_dated(s, "LETF series");

    CETable table;
    table.mode = mode;
    table.betas = betas;
    const Date first = benchmark.dates().front(), last = benchmark.dates().back();
    for (const RegimeWindow& w0 : windows) {
        RegimeWindow w = w0;
        if (w.start < first || w.end > last) {
            w.start = std::max(w.start, first);
            w.end = std::min(w.end, last);
            table.warnings.push_back("window '" + w0.label + "' clipped to data range " +
                                     format_iso_date(first) + ".." + format_iso_date(last));
        }
        const auto [lo, hi] = date_range(benchmark.dates(), w.start, w.end);
        if (w.end < w.start || lo >= hi)
            throw_data("empty-window", "no benchmark data in window '" + w0.label + "'");
        const ReturnSeries slice = benchmark.slice(lo, hi - lo);

        std::vector<CECell> row;
        for (int beta : betas) {
            CECell cell;
            if (mode == TableMode::Synthetic) {
                cell.ce = compounding_effect(slice, LeverageSpec(beta)).ce;
                cell.n_obs = slice.size();
            } else if (const auto it = realized.find(beta); it != realized.end() && !it->second.empty()) {
                const ReturnSeries& letf = it->second;
                const bool covers = letf.dates().front() <= slice.dates().front() &&
                                    letf.dates().back() >= slice.dates().back();
                if (covers) {
                    const AlignedPair p = align(slice, letf);
                    cell.ce = compounding_effect(p.first, p.second, beta).ce;
                    cell.n_obs = p.first.size();
                }
            }
            row.push_back(cell);
        }
        table.windows.push_back(w);
        table.cells.push_back(std::move(row));
    }
    return table;
}

namespace {

std::vector<RollingPoint> rolling_pairs(const ReturnSeries& etf, const ReturnSeries& letf, int beta,
                                        std::size_t window) {
    if (window < 1) throw_config("invalid-window", "window must be >= 1");
    if (window > etf.size())
        throw_config("window-too-large", "window " + std::to_string(window) + " exceeds series length " +
                                             std::to_string(etf.size()));
    std::vector<RollingPoint> out(etf.size() - window + 1);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::size_t end = i + window - 1;
        out[i].end_index = end;
        if (etf.has_dates()) out[i].date = etf.dates()[end];
        out[i].value = compounding_effect(etf.slice(i, window), letf.slice(i, window), beta).ce;
    }
    return out;
}

}  // namespace

std::vector<RollingPoint> rolling_ce(const ReturnSeries& benchmark, int beta, std::size_t window) {
    return rolling_pairs(benchmark, synthetic_letf(benchmark, LeverageSpec(beta)), beta, window);
}

std::vector<RollingPoint> rolling_ce(const ReturnSeries& benchmark, const ReturnSeries& letf, int beta,
                                     std::size_t window) {
    const AlignedPair p = align(benchmark, letf);
    return rolling_pairs(p.first, p.second, beta, window);
}

}  // namespace letf::emp
