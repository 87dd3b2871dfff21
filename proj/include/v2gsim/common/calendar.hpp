// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace v2g {

/// Wall-clock start of a simulation, minute resolution, no time zone.
struct CalendarTime {
  int year = 2024;
  int month = 1;
  int day = 8; // a Monday
  int hour = 5;
  int minute = 0;

  /// Parses "YYYY-MM-DD HH:MM" (a 'T' separator is also accepted).
  static CalendarTime parse(const std::string &text);
  std::string to_string() const;

  /// Minutes elapsed since Monday 00:00 of the same week, in [0, 10080).
  int minute_of_week() const;

  /// Minutes since 1970-01-01 00:00.
  long long epoch_minutes() const;

  bool operator==(const CalendarTime &) const = default;
};

/// Hour of week (0 = Monday 00:00-00:59) after `minutes` have elapsed.
int hour_of_week_after(const CalendarTime &start, long long minutes);

} // namespace v2g
