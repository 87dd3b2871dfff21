// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/common/calendar.hpp"

#include "v2gsim/common/errors.hpp"

#include <chrono>
#include <cstdio>

namespace v2g {

namespace {

std::chrono::sys_days to_days(const CalendarTime &t) {
  using namespace std::chrono;
  year_month_day ymd{year{t.year}, month{static_cast<unsigned>(t.month)},
                     day{static_cast<unsigned>(t.day)}};
  if (!ymd.ok())
    throw ConfigError("simulation.start_datetime", "invalid calendar date");
  return sys_days{ymd};
}

} // namespace

CalendarTime CalendarTime::parse(const std::string &text) {
  CalendarTime t;
  char sep = ' ';
  int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d", &t.year, &t.month,
                      &t.day, &sep, &t.hour, &t.minute);
  if (n != 6 || (sep != ' ' && sep != 'T') || t.hour < 0 || t.hour > 23 ||
      t.minute < 0 || t.minute > 59) {
    throw ConfigError("simulation.start_datetime",
                      "expected 'YYYY-MM-DD HH:MM', got '" + text + "'");
  }
  to_days(t); // validates the date
  return t;
}

std::string CalendarTime::to_string() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d %02d:%02d", year, month, day,
                hour, minute);
  return buf;
}

int CalendarTime::minute_of_week() const {
  std::chrono::weekday wd{to_days(*this)};
  int dow = static_cast<int>(wd.iso_encoding()) - 1; // Monday = 0
  return dow * 1440 + hour * 60 + minute;
}

long long CalendarTime::epoch_minutes() const {
  auto days = to_days(*this).time_since_epoch().count();
  return static_cast<long long>(days) * 1440 + hour * 60 + minute;
}

int hour_of_week_after(const CalendarTime &start, long long minutes) {
  long long m = (start.minute_of_week() + minutes) % 10080;
  if (m < 0)
    m += 10080;
  return static_cast<int>(m / 60);
}

} // namespace v2g
