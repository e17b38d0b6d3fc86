#include "wincast/date.hpp"

#include <charconv>
#include <cstdio>

namespace wincast {
namespace {

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    if (s.empty()) return std::nullopt;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<Date> make_date(int y, int m, int d) {
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (m < 1 || d < 1 || !date.ok()) return std::nullopt;
    return date;
}

}  // namespace

std::optional<Date> parse_us_date(std::string_view text) {
    const auto s1 = text.find('/');
    if (s1 == std::string_view::npos) return std::nullopt;
    const auto s2 = text.find('/', s1 + 1);
    if (s2 == std::string_view::npos) return std::nullopt;
    const auto m = parse_int(text.substr(0, s1));
    const auto d = parse_int(text.substr(s1 + 1, s2 - s1 - 1));
    const auto yv = text.substr(s2 + 1);
    const auto y = parse_int(yv);
    if (!m || !d || !y || *y < 0) return std::nullopt;
    const int year = yv.size() <= 2 ? 2000 + *y : *y;
    return make_date(year, *m, *d);
}

std::optional<Date> parse_iso_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    const auto y = parse_int(text.substr(0, 4));
    const auto m = parse_int(text.substr(5, 2));
    const auto d = parse_int(text.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    return make_date(*y, *m, *d);
}

std::string to_iso(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                  static_cast<unsigned>(d.day()));
    return buf;
}

std::string to_us_short(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u/%u/%02d", static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()),
                  static_cast<int>(d.year()) % 100);
    return buf;
}

Date add_days(Date d, long n) { return Date{std::chrono::sys_days{d} + std::chrono::days{n}}; }

long days_between(Date a, Date b) {
    return static_cast<long>((std::chrono::sys_days{b} - std::chrono::sys_days{a}).count());
}

}  // namespace wincast
