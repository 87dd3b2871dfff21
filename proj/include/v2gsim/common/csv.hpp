// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace v2g::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based line number in the source file for each row (for error messages).
  std::vector<int> line_numbers;
};

/// Reads a comma-separated file with a header line. Blank lines and lines
/// starting with '#' are skipped. Throws DataError if the file cannot be read.
Table read(const std::filesystem::path &path);
Table parse(std::string_view text, const std::string &origin = "<memory>");

/// Strict number parse; throws DataError naming origin, line and column.
double to_double(const std::string &cell, const std::string &origin, int line,
                 int column);

/// Formats a double so it parses back to the identical value.
std::string format_exact(double value);

void write(const std::filesystem::path &path, const Table &table);

} // namespace v2g::csv
