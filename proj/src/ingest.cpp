#include "wincast/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wincast/csv.hpp"
#include "wincast/error.hpp"

namespace wincast {
namespace {

using csv::split_record;
using csv::write_field;

constexpr std::array<std::string_view, 4> kHeaderPrefix{"Province/State", "Country/Region", "Lat", "Long"};

std::optional<double> parse_coord(const std::string& s, std::size_t line_no) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::NonNumericCount, "line " + std::to_string(line_no) + ": bad coordinate '" + s + "'");
    }
    return v;
}

Count parse_count(const std::string& s, std::size_t line_no, std::size_t col) {
    Count v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v < 0) {
        throw Error(ErrorCode::NonNumericCount, "line " + std::to_string(line_no) + ", column " +
                                                    std::to_string(col + 1) + ": count '" + s +
                                                    "' is not a non-negative integer");
    }
    return v;
}

void write_double(std::ostream& out, const std::optional<double>& v) {
    if (!v) return;
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *v);
    out.write(buf, ptr - buf);
}

std::string_view trim_view(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

RawTable parse_jhu_csv(std::istream& in) {
    RawTable table;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw Error(ErrorCode::MalformedHeader, "empty input");
    ++line_no;
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_record(line, line_no);
    if (header.size() < kHeaderPrefix.size() ||
        !std::equal(kHeaderPrefix.begin(), kHeaderPrefix.end(), header.begin())) {
        throw Error(ErrorCode::MalformedHeader,
                    "header must start with Province/State,Country/Region,Lat,Long");
    }
    for (std::size_t c = kHeaderPrefix.size(); c < header.size(); ++c) {
        const auto d = parse_us_date(header[c]);
        if (!d) throw Error(ErrorCode::MalformedHeader, "header column " + std::to_string(c + 1) + " '" +
                                                            header[c] + "' is not an M/D/YY date");
        if (!table.dates.empty() && days_between(table.dates.back(), *d) != 1) {
            throw Error(ErrorCode::NonMonotoneDates, "header date " + header[c] + " does not follow " +
                                                         to_iso(table.dates.back()) + " by one day");
        }
        table.dates.push_back(*d);
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_record(line, line_no);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::RaggedRow, "line " + std::to_string(line_no) + " has " +
                                                  std::to_string(fields.size()) + " fields, header has " +
                                                  std::to_string(header.size()));
        }
        RawRow row;
        if (!fields[0].empty()) row.province = std::move(fields[0]);
        row.country = std::move(fields[1]);
        row.lat = parse_coord(fields[2], line_no);
        row.lon = parse_coord(fields[3], line_no);
        row.counts.reserve(table.dates.size());
        for (std::size_t c = kHeaderPrefix.size(); c < fields.size(); ++c) {
            row.counts.push_back(parse_count(fields[c], line_no, c));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

RawTable parse_jhu_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_jhu_csv(in);
}

RawTable load_jhu_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return parse_jhu_csv(in);
}

void write_jhu_csv(std::ostream& out, const RawTable& table) {
    out << "Province/State,Country/Region,Lat,Long";
    for (const auto& d : table.dates) out << ',' << to_us_short(d);
    out << '\n';
    for (const auto& row : table.rows) {
        write_field(out, row.province.value_or(""));
        out << ',';
        write_field(out, row.country);
        out << ',';
        write_double(out, row.lat);
        out << ',';
        write_double(out, row.lon);
        for (const Count c : row.counts) out << ',' << c;
        out << '\n';
    }
}

std::vector<Count> aggregate_country(const RawTable& table, std::string_view country) {
    std::vector<Count> sum(table.dates.size(), 0);
    bool found = false;
    for (const auto& row : table.rows) {
        if (row.country != country) continue;
        found = true;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += row.counts[i];
    }
    if (!found) throw Error(ErrorCode::UnknownCountry, "no rows for country '" + std::string(country) + "'");
    return sum;
}

std::vector<std::string> country_names(const RawTable& table) {
    std::vector<std::string> names;
    for (const auto& row : table.rows)
        if (std::find(names.begin(), names.end(), row.country) == names.end()) names.push_back(row.country);
    return names;
}

std::string describe(const DataWarning& w) {
    std::ostringstream s;
    s << to_iso(w.date) << ": ";
    if (w.kind == DataWarning::Kind::Decrease) {
        s << "cumulative count decreased from " << w.previous << " to " << w.value;
    } else {
        s << "reported zero after the first case (previous " << w.previous << "), floored to 1";
    }
    return s.str();
}

CountrySeries CountrySeries::truncated(std::size_t n) const {
    CountrySeries out;
    out.country = country;
    out.start_date = start_date;
    n = std::min(n, counts.size());
    out.counts.assign(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(n));
    out.raw_counts.assign(raw_counts.begin(), raw_counts.begin() + static_cast<std::ptrdiff_t>(n));
    for (const auto& w : warnings)
        if (w.index < n) out.warnings.push_back(w);
    return out;
}

CountrySeries trim_to_first_case(std::span<const Count> counts, std::span<const Date> dates, std::string country) {
    if (counts.size() != dates.size()) throw Error(ErrorCode::DimensionMismatch, "counts and dates differ in length");
    const auto first = std::find_if(counts.begin(), counts.end(), [](Count c) { return c > 0; });
    if (first == counts.end()) {
        throw Error(ErrorCode::AllZero, "no case ever reported" + (country.empty() ? "" : " for " + country));
    }
    const auto offset = static_cast<std::size_t>(first - counts.begin());

    CountrySeries s;
    s.country = std::move(country);
    s.start_date = dates[offset];
    s.raw_counts.assign(first, counts.end());
    s.counts.reserve(s.raw_counts.size());
    for (std::size_t i = 0; i < s.raw_counts.size(); ++i) {
        const Count v = s.raw_counts[i];
        if (v == 0) {
            s.warnings.push_back({DataWarning::Kind::InteriorZero, i, dates[offset + i], s.raw_counts[i - 1], v});
        } else if (i > 0 && v < s.raw_counts[i - 1]) {
            s.warnings.push_back({DataWarning::Kind::Decrease, i, dates[offset + i], s.raw_counts[i - 1], v});
        }
        s.counts.push_back(std::max<Count>(v, 1));
    }
    return s;
}

CountrySeries load_country(const RawTable& table, std::string_view country) {
    return trim_to_first_case(aggregate_country(table, country), table.dates, std::string(country));
}

AliasMap AliasMap::defaults() {
    AliasMap m;
    m.add("USA", "US");
    m.add("United States", "US");
    m.add("UK", "United Kingdom");
    m.add("South Korea", "Korea, South");
    return m;
}

AliasMap AliasMap::parse(std::istream& in) {
    AliasMap m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view v = line;
        if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim_view(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidArgument, "alias line " + std::to_string(line_no) + ": expected 'alias = name'");
        }
        m.add(std::string(trim_view(v.substr(0, eq))), std::string(trim_view(v.substr(eq + 1))));
    }
    return m;
}

AliasMap AliasMap::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open alias file " + path.string());
    return parse(in);
}

void AliasMap::add(std::string alias, std::string canonical) { map_[std::move(alias)] = std::move(canonical); }

std::string AliasMap::resolve(std::string_view name) const {
    const auto it = map_.find(name);
    return it == map_.end() ? std::string(name) : it->second;
}

const std::vector<std::string>& default_countries() {
    static const std::vector<std::string> names{"Sweden", "Denmark", "Finland", "Norway", "France", "Italy",
                                                "Spain",  "UK",      "China",   "India",  "Iran",   "USA"};
    return names;
}

}  // namespace wincast
