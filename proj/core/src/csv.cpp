#include "bknn/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <stdexcept>
#include <system_error>

namespace bknn {

std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "nan")
    return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf")
    return std::numeric_limits<double>::infinity();
  if (text == "-inf")
    return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::runtime_error("not a number: '" + std::string(text) + "'");
  return v;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name)
      return i;
  throw std::runtime_error("csv: missing column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::string_view name) const {
  const auto c = column(name);
  if (row >= rows.size() || c >= rows[row].size())
    throw std::runtime_error("csv: short row");
  return parse_double(rows[row][c]);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

std::vector<CsvTable> read_csv_sections(std::istream &in) {
  std::vector<CsvTable> tables;
  bool need_header = true;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line.front() == '#') {
      need_header = true;
      continue;
    }
    if (need_header) {
      tables.emplace_back();
      tables.back().header = split_csv_line(line);
      need_header = false;
    } else {
      tables.back().rows.push_back(split_csv_line(line));
    }
  }
  return tables;
}

CsvTable read_csv(std::istream &in) {
  auto tables = read_csv_sections(in);
  if (tables.empty())
    throw std::runtime_error("csv: no table found");
  return std::move(tables.front());
}

} // namespace bknn
