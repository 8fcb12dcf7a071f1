#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace xrsim::report {

using Cell = std::variant<std::int64_t, double, bool, std::string>;

// Tabular report. CSV: comma separated, '.' decimal point, header row, LF
// line endings, doubles in shortest round-trip form. JSON: an array of
// objects keyed by column name carrying the same values.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::string to_csv() const;
  std::string to_json() const;
};

enum class Format { csv, json };

std::string render(const Table& table, Format format);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Writes to a sibling temporary file and renames it into place, so a failed
// run never leaves a partial report behind.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace xrsim::report
