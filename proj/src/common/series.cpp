// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/common/series.hpp"

#include "v2gsim/common/csv.hpp"
#include "v2gsim/common/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace v2g {

std::vector<std::vector<double>>
load_step_series(const std::filesystem::path &path, int value_columns,
                 const CalendarTime &start, int timescale_minutes, int length) {
  auto table = csv::read(path);
  const auto origin = path.string();
  if (static_cast<int>(table.header.size()) != value_columns + 1)
    throw DataError(origin + ": expected " +
                    std::to_string(value_columns + 1) + " columns");
  if (table.rows.empty())
    throw DataError(origin + ": no data rows");

  std::map<long long, std::vector<double>> by_step;
  const long long start_min = start.epoch_minutes();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto &r = table.rows[i];
    const int line = table.line_numbers[i];
    long long step;
    if (r[0].find('-') != std::string::npos && r[0].find(':') != std::string::npos) {
      CalendarTime ts;
      try {
        ts = CalendarTime::parse(r[0]);
      } catch (const ConfigError &) {
        throw DataError(origin + ":" + std::to_string(line) +
                        ": column 1: bad timestamp '" + r[0] + "'");
      }
      long long delta = ts.epoch_minutes() - start_min;
      step = static_cast<long long>(
          std::floor(static_cast<double>(delta) / timescale_minutes));
    } else {
      double s = csv::to_double(r[0], origin, line, 1);
      if (std::floor(s) != s)
        throw DataError(origin + ":" + std::to_string(line) +
                        ": column 1: step index must be an integer");
      step = static_cast<long long>(s);
    }
    std::vector<double> values;
    for (int c = 0; c < value_columns; ++c)
      values.push_back(csv::to_double(r[c + 1], origin, line, c + 2));
    by_step[step] = std::move(values);
  }

  std::vector<std::vector<double>> out(value_columns,
                                       std::vector<double>(length));
  auto it = by_step.begin();
  std::vector<double> current = it->second;
  for (int t = 0; t < length; ++t) {
    while (it != by_step.end() && it->first <= t) {
      current = it->second;
      ++it;
    }
    for (int c = 0; c < value_columns; ++c)
      out[c][t] = current[c];
  }
  return out;
}

} // namespace v2g
