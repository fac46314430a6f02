#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace letf {

using Date = std::chrono::year_month_day;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD). Returns nullopt on
/// malformed text or an impossible date.
std::optional<Date> parse_iso_date(std::string_view text);

std::string format_iso_date(const Date& d);

/// Month-precision bound ("YYYY-MM") resolved to the first or last calendar
/// day of that month. Full dates are accepted unchanged.
std::optional<Date> parse_period_start(std::string_view text);
std::optional<Date> parse_period_end(std::string_view text);

}  // namespace letf
