#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace wincast {

using Date = std::chrono::year_month_day;

/// Parses the JHU header form `M/D/YY` (two-digit years are 20YY).
std::optional<Date> parse_us_date(std::string_view text);

/// Parses `YYYY-MM-DD`.
std::optional<Date> parse_iso_date(std::string_view text);

std::string to_iso(Date d);

/// `M/D/YY`, the inverse of parse_us_date.
std::string to_us_short(Date d);

Date add_days(Date d, long n);

/// b - a in days.
long days_between(Date a, Date b);

}  // namespace wincast
