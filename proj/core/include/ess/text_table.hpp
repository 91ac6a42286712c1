#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ess {

/// Comma-delimited table with a one-line header. Blank lines are skipped; lines
/// starting with '#' are comments, and `# key: value` comments are kept as metadata.
struct TextTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
  std::map<std::string, std::string> meta;

  /// Throws Error(ParseError) naming the source when the column is absent.
  std::size_t column(std::string_view name) const;
  /// Parses a cell as a finite double; errors carry source:line and column name.
  double number(std::size_t row, std::size_t col) const;
  std::string locate(std::size_t row, std::size_t col) const;
};

TextTable read_table(std::istream& in, const std::string& source);
TextTable load_table(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);
/// Strict full-string numeric parse; false on trailing garbage or non-finite values.
bool parse_number(std::string_view s, double& out);

/// Shortest representation that round-trips to the same double.
std::string format_exact(double v);
/// Fixed six significant digits (%.6g), used for every emitted result table.
std::string format_sig6(double v);

}  // namespace ess
