#include "distill/table.h"

#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "distill/errors.h"

namespace distill {
namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

void write_line(const std::vector<std::string>& cells, std::ostream& out) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size()) {
    throw std::logic_error("row width does not match the header");
  }
  rows.push_back(std::move(cells));
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_number(long value) { return std::to_string(value); }

void write_csv(const Table& table, std::ostream& out) {
  write_line(table.columns, out);
  for (const auto& row : table.rows) write_line(row, out);
  for (const auto& c : table.comments) out << "# " << c << '\n';
}

Table parse_csv(std::string_view text) {
  Table table;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(line.size() > 1 && line[1] == ' ' ? 2 : 1);
      table.comments.emplace_back(line);
    } else if (!have_header) {
      table.columns = split_line(line);
      have_header = true;
    } else {
      auto cells = split_line(line);
      if (cells.size() != table.columns.size()) {
        throw DomainError("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                          std::to_string(table.columns.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

}  // namespace distill
