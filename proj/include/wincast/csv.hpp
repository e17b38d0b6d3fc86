#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wincast::csv {

/// Splits one record with RFC 4180 quoting (no embedded newlines).
/// line_no only feeds error messages.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no);

/// Writes s, quoted when it holds a comma, quote, or line break.
void write_field(std::ostream& out, std::string_view s);

/// Shortest text that parses back to exactly v.
std::string format_double(double v);

/// Strict full-string parses; throw NonNumericCount naming `what`.
double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);

}  // namespace wincast::csv
