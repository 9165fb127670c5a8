#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ocs::csv {

/// Locale-independent, 12 significant digits. Output files are byte-stable.
std::string format_number(double value);

/// Appends one comma-separated row terminated by '\n'.
void append_row(std::string& out, std::span<const double> values);
void append_header(std::string& out, std::span<const std::string> columns);

struct Table {
  std::vector<std::string> header;
  std::vector<std::string> comments;  // '#' lines, without the marker
  std::vector<std::vector<double>> rows;
};

/// Parses a numeric CSV with one header row. Lines starting with '#' are
/// collected as comments, blank lines are skipped. Errors carry the 1-based
/// line number.
Table parse(std::string_view text);

/// Checks that `table.header` matches `expected` (whitespace-trimmed).
void expect_header(const Table& table, std::span<const std::string> expected,
                   std::string_view what);

}  // namespace ocs::csv
