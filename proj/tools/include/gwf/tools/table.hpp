#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace gwf::tools {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

// A named CSV table. Doubles are written with %.17g so that equal inputs
// give byte-identical files.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

std::string format_cell(const Cell& cell);
void write_csv(std::ostream& out, const Table& table);
// Writes the table and returns the file contents.
std::string write_csv_file(const std::string& path, const Table& table);

}  // namespace gwf::tools
