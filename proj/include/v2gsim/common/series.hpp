// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/common/calendar.hpp"

#include <filesystem>
#include <vector>

namespace v2g {

/// Reads a CSV whose first column is either a step index or a timestamp
/// ("YYYY-MM-DD HH:MM") followed by `value_columns` numeric columns, and
/// resamples it onto steps [0, length). Steps between rows hold the previous
/// value; steps before the first row take the first row's value.
/// Returns one vector per value column.
std::vector<std::vector<double>>
load_step_series(const std::filesystem::path &path, int value_columns,
                 const CalendarTime &start, int timescale_minutes, int length);

/// Value at `step`, holding the last entry past the end.
inline double hold_at(const std::vector<double> &series, int step) {
  if (series.empty())
    return 0.0;
  if (step < 0)
    return series.front();
  if (static_cast<std::size_t>(step) >= series.size())
    return series.back();
  return series[static_cast<std::size_t>(step)];
}

} // namespace v2g
