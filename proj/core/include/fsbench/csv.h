#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fsbench {

using CsvRow = std::vector<std::string>;

struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;
  // 1-based physical line on which each row started, for diagnostics.
  std::vector<std::size_t> line_numbers;
};

// RFC 4180 reader: comma separator, double-quote quoting with "" escapes,
// CRLF or LF line endings, optional UTF-8 BOM. Blank lines are skipped.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

std::string quote_csv_field(std::string_view field);
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

// Full-field parse of a finite real; surrounding blanks are ignored.
std::optional<double> parse_number(std::string_view text);

// Cell spellings that ingestion treats as missing.
bool is_missing_token(std::string_view text);

}  // namespace fsbench
