#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace actimetry::csv {

/// A parsed comma-separated file. Cells are unquoted, whitespace-trimmed
/// strings; `line_numbers[i]` is the 1-based source line of `rows[i]`.
struct Table {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;

  /// Index of a header column; throws FormatError if absent.
  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;

  /// "source:line" for diagnostics.
  std::string where(std::size_t row) const;
};

/// Reads a CSV document. Blank lines are rejected, as is any row whose
/// cell count differs from the header's.
Table read(std::istream& in, std::string source = "<stream>");
Table read_file(const std::filesystem::path& path);

/// Shortest decimal string that parses back to exactly `v`; empty for NaN.
std::string format_number(double v);

/// Parses a finite decimal number, throwing FormatError with `where` on failure.
double parse_number(std::string_view cell, const std::string& where);
long long parse_integer(std::string_view cell, const std::string& where);

/// Quotes a cell only when it contains a comma, quote, or newline.
std::string escape(std::string_view cell);

}  // namespace actimetry::csv
