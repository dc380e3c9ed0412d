#ifndef DISTILL_TABLE_H_
#define DISTILL_TABLE_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace distill {

// A CSV table: header, rows of cells, and '#'-prefixed comment lines written
// after the rows (summary values such as yields).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;

  void add_row(std::vector<std::string> cells);
};

// Shortest round-tripping text (17 significant digits, '.' decimal separator).
std::string format_number(double value);
std::string format_number(long value);

void write_csv(const Table& table, std::ostream& out);
Table parse_csv(std::string_view text);

}  // namespace distill

#endif  // DISTILL_TABLE_H_
