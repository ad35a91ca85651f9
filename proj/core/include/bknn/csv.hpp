#ifndef BKNN_CSV_HPP
#define BKNN_CSV_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bknn {

/// 17 significant digits, locale-independent; parses back to the same double.
std::string format_double(double v);

/// Parses a double written by format_double (also "nan", "inf").
double parse_double(std::string_view text);

/// A parsed comma-separated table: one header row plus data rows. Lines
/// starting with '#' and blank lines end the current table; see
/// read_csv_sections.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws std::runtime_error if absent.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

std::vector<std::string> split_csv_line(std::string_view line);

/// Reads consecutive tables separated by '#'-prefixed marker lines.
std::vector<CsvTable> read_csv_sections(std::istream &in);
CsvTable read_csv(std::istream &in);

} // namespace bknn

#endif
