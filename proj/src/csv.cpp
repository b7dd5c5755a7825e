#include "oaekit/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oaekit/error.hpp"

namespace oaekit::csv {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string where(const Table& t, std::size_t row) {
  return t.source + ": line " + std::to_string(Table::line_of(row));
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw SchemaViolation(source + ": missing column '" + name + "'");
}

const std::string& Table::cell(std::size_t row, const std::string& name) const {
  return rows.at(row).at(column(name));
}

double Table::number(std::size_t row, const std::string& name) const { return number(row, column(name)); }

long long Table::integer(std::size_t row, const std::string& name) const { return integer(row, column(name)); }

double Table::number(std::size_t row, std::size_t col) const {
  const auto& s = rows.at(row).at(col);
  const auto& name = header.at(col);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw SchemaViolation(where(*this, row) + ": column '" + name + "' is not a finite number: '" + s + "'");
}

long long Table::integer(std::size_t row, std::size_t col) const {
  const auto& s = rows.at(row).at(col);
  const auto& name = header.at(col);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw SchemaViolation(where(*this, row) + ": column '" + name + "' is not an integer: '" + s + "'");
  }
  return v;
}

Table parse(const std::string& text, const std::string& source) {
  Table t;
  t.source = source;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.empty()) continue;
    auto fields = split(line);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw SchemaViolation(source + ": line " + std::to_string(line_no) + ": expected " +
                            std::to_string(t.header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  if (!have_header) throw SchemaViolation(source + ": empty file (header row required)");
  return t;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInput("file not found: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Table read(const std::filesystem::path& path) { return parse(read_text(path), path.string()); }

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
  if (!out) throw InvalidArgument("failed writing " + path.string());
}

}  // namespace oaekit::csv
