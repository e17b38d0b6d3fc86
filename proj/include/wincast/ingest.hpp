#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wincast/date.hpp"

namespace wincast {

using Count = std::int64_t;

struct RawRow {
    std::optional<std::string> province;
    std::string country;
    std::optional<double> lat;
    std::optional<double> lon;
    std::vector<Count> counts;  ///< one per header date

    friend bool operator==(const RawRow&, const RawRow&) = default;
};

/// A parsed confirmed-cases table in the JHU CSSE global layout.
struct RawTable {
    std::vector<Date> dates;  ///< consecutive calendar days
    std::vector<RawRow> rows;

    friend bool operator==(const RawTable&, const RawTable&) = default;
};

RawTable parse_jhu_csv(std::istream& in);
RawTable parse_jhu_csv(std::string_view text);
RawTable load_jhu_csv(const std::filesystem::path& path);

/// Writes the table back in the same layout; parse(write(t)) == t.
void write_jhu_csv(std::ostream& out, const RawTable& table);

/// Element-wise sum of every row whose Country/Region equals `country`.
std::vector<Count> aggregate_country(const RawTable& table, std::string_view country);

/// Distinct Country/Region values in first-seen order.
std::vector<std::string> country_names(const RawTable& table);

struct DataWarning {
    enum class Kind { Decrease, InteriorZero };
    Kind kind;
    std::size_t index;  ///< position in the trimmed series
    Date date;
    Count previous;
    Count value;
};

std::string describe(const DataWarning& w);

/// Cumulative confirmed cases for one country starting at the first
/// reported case. `counts` is floored at 1 for the log transform;
/// `raw_counts` keeps the reported numbers.
struct CountrySeries {
    std::string country;
    Date start_date;
    std::vector<Count> counts;
    std::vector<Count> raw_counts;
    std::vector<DataWarning> warnings;

    [[nodiscard]] std::size_t size() const noexcept { return counts.size(); }
    [[nodiscard]] Date date_at(std::size_t i) const { return add_days(start_date, static_cast<long>(i)); }

    /// Copy holding only days [0, n).
    [[nodiscard]] CountrySeries truncated(std::size_t n) const;
};

/// Drops the leading zeros. Decreases and interior zeros are recorded as
/// warnings; interior zeros are floored to 1 in `counts`.
CountrySeries trim_to_first_case(std::span<const Count> counts, std::span<const Date> dates,
                                 std::string country = {});

/// aggregate_country + trim_to_first_case.
CountrySeries load_country(const RawTable& table, std::string_view country);

/// Colloquial-name -> Country/Region lookup. Names with no alias map to
/// themselves.
class AliasMap {
public:
    static AliasMap defaults();

    /// Lines `alias = Country/Region`; `#` starts a comment.
    static AliasMap parse(std::istream& in);
    static AliasMap load(const std::filesystem::path& path);

    void add(std::string alias, std::string canonical);
    [[nodiscard]] std::string resolve(std::string_view name) const;
    [[nodiscard]] const std::map<std::string, std::string, std::less<>>& entries() const noexcept {
        return map_;
    }

private:
    std::map<std::string, std::string, std::less<>> map_;
};

/// The twelve countries of the reference study, by colloquial name.
const std::vector<std::string>& default_countries();

}  // namespace wincast
