#pragma once

#include <filesystem>
#include <string>
#include <vector>

// Minimal comma-separated tables: no quoting, header row required. Errors
// are SchemaViolation naming the source and 1-based line number.
namespace oaekit::csv {

struct Table {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of column `name`; SchemaViolation if absent.
  [[nodiscard]] std::size_t column(const std::string& name) const;
  // Line number in the source of data row `row` (header is line 1).
  [[nodiscard]] static std::size_t line_of(std::size_t row) { return row + 2; }

  [[nodiscard]] const std::string& cell(std::size_t row, const std::string& name) const;
  [[nodiscard]] double number(std::size_t row, const std::string& name) const;
  [[nodiscard]] long long integer(std::size_t row, const std::string& name) const;
  [[nodiscard]] double number(std::size_t row, std::size_t col) const;
  [[nodiscard]] long long integer(std::size_t row, std::size_t col) const;
};

Table parse(const std::string& text, const std::string& source);
Table read(const std::filesystem::path& path);  // MissingInput when absent

// Whole file as text; MissingInput when absent.
std::string read_text(const std::filesystem::path& path);

// "%.9g"
std::string format_number(double v);

// Writes text atomically enough for our purposes: to `path`, truncating.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace oaekit::csv
