// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/common/csv.hpp"

#include "v2gsim/common/errors.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace v2g::csv {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r'))
    ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
    --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

} // namespace

Table parse(std::string_view text, const std::string &origin) {
  Table table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#')
      continue;
    auto cells = split(t);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw DataError(origin + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " columns, got " +
                      std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header)
    throw DataError(origin + ": missing header line");
  return table;
}

Table read(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw DataError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

double to_double(const std::string &cell, const std::string &origin, int line,
                 int column) {
  const char *begin = cell.c_str();
  char *end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (cell.empty() || end == begin || *end != '\0' || errno == ERANGE) {
    throw DataError(origin + ":" + std::to_string(line) + ": column " +
                    std::to_string(column) + ": not a number: '" + cell + "'");
  }
  return v;
}

std::string format_exact(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write(const std::filesystem::path &path, const Table &table) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out)
    throw DataError("cannot write " + path.string());
  auto emit = [&](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i)
        out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto &r : table.rows)
    emit(r);
}

} // namespace v2g::csv
