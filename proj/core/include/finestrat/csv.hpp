#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace finestrat::csv {

//! A parsed CSV table. Lines starting with '#' before the header are kept as
//! metadata; `key=value` tokens in them are exposed through `meta`.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row
  std::map<std::string, std::string> meta;

  //! Column index by name, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
  //! Column index by name; throws DataError naming the column if absent.
  std::size_t require_column(std::string_view name) const;
};

Table read(std::istream& in);

//! Parse a finite double; throws DataError mentioning `line` and `column`.
double parse_double(std::string_view field, std::size_t line, std::string_view column);
long long parse_int(std::string_view field, std::size_t line, std::string_view column);

//! Shortest round-trip representation of a double.
std::string format_double(double v);

std::vector<std::string> split(std::string_view line, char sep = ',');
std::string trim(std::string_view s);

}  // namespace finestrat::csv
