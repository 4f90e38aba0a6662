#include "actimetry/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <system_error>

#include "actimetry/error.hpp"

namespace actimetry::csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_line(std::string_view line, const std::string& where) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      cells.emplace_back(was_quoted ? cell : std::string(trim(cell)));
      cell.clear();
      was_quoted = false;
    } else {
      cell.push_back(c);
    }
  }
  if (quoted) throw FormatError(where + ": unterminated quoted cell");
  cells.emplace_back(was_quoted ? cell : std::string(trim(cell)));
  return cells;
}

}  // namespace

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::column(std::string_view name) const {
  if (auto idx = find_column(name)) return *idx;
  throw FormatError(source + ": missing required column '" + std::string(name) + "'");
}

std::string Table::where(std::size_t row) const {
  return source + ":" + std::to_string(line_numbers.at(row));
}

Table read(std::istream& in, std::string source) {
  Table table;
  table.source = std::move(source);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = table.source + ":" + std::to_string(line_no);
    if (trim(line).empty()) {
      // A single trailing newline produces no extra getline; anything blank is a real blank row.
      if (in.peek() == std::char_traits<char>::eof() && in.eof()) break;
      throw FormatError(where + ": blank row");
    }
    auto cells = split_line(line, where);
    if (!have_header) {
      if (!cells.empty() && cells.front().rfind("\xEF\xBB\xBF", 0) == 0) cells.front().erase(0, 3);
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw FormatError(where + ": expected " + std::to_string(table.header.size()) +
                        " cells, found " + std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw FormatError(table.source + ": empty file (no header)");
  return table;
}

Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return read(in, path.string());
}

std::string format_number(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf, ptr);
}

double parse_number(std::string_view cell, const std::string& where) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    throw FormatError(where + ": not a number: '" + std::string(cell) + "'");
  }
  return v;
}

long long parse_integer(std::string_view cell, const std::string& where) {
  cell = trim(cell);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
    // Accept integral values written as decimals, e.g. "2.0".
    const double d = parse_number(cell, where);
    if (d != std::floor(d)) throw FormatError(where + ": not an integer: '" + std::string(cell) + "'");
    return static_cast<long long>(d);
  }
  return v;
}

std::string escape(std::string_view cell) {
  if (cell.find_first_of(",\"\n") == std::string_view::npos) return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace actimetry::csv
