#include "letf/date.hpp"

#include <charconv>
#include <cstdio>

namespace letf {
namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::optional<std::chrono::year_month> parse_year_month(std::string_view text) {
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    int y = 0, m = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m)) return std::nullopt;
    std::chrono::year_month ym{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)}};
    if (!ym.ok()) return std::nullopt;
    return ym;
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text) {
    if (text.size() != 10 || text[7] != '-') return std::nullopt;
    auto ym = parse_year_month(text.substr(0, 7));
    int d = 0;
    if (!ym || !parse_int(text.substr(8, 2), d)) return std::nullopt;
    Date date{ym->year(), ym->month(), std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_iso_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::optional<Date> parse_period_start(std::string_view text) {
    if (auto ym = parse_year_month(text)) return Date{ym->year(), ym->month(), std::chrono::day{1}};
    return parse_iso_date(text);
}

std::optional<Date> parse_period_end(std::string_view text) {
    if (auto ym = parse_year_month(text))
        return Date{std::chrono::year_month_day_last{ym->year(),
                                                     std::chrono::month_day_last{ym->month()}}};
    return parse_iso_date(text);
}

}  // namespace letf
