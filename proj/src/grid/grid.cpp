// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/grid/grid.hpp"

#include "v2gsim/common/errors.hpp"
#include "v2gsim/common/rng.hpp"
#include "v2gsim/common/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace v2g::grid {

void TransformerSpec::validate(const std::string &field) const {
  if (!(min_power_kw < max_power_kw))
    throw ConfigError(field + ".max_power_kw", "must exceed min_power_kw");
  if (load_peak_kw < 0.0)
    throw ConfigError(field + ".load_peak_kw", "must be nonnegative");
  if (pv_peak_kw < 0.0)
    throw ConfigError(field + ".pv_peak_kw", "must be nonnegative");
  if (dr_notice_steps < 0)
    throw ConfigError(field + ".dr_notice_steps", "must be nonnegative");
  if (dr) {
    if (dr->start_step < 0 || dr->duration_steps < 0)
      throw ConfigError(field + ".dr", "start and duration must be >= 0");
    if (dr->reduction_kw < 0.0)
      throw ConfigError(field + ".dr.reduction_kw", "must be nonnegative");
  }
}

double net_power(const TransformerSeries &s, int step, double ev_kw) {
  return ev_kw + hold_at(s.load, step) + hold_at(s.pv, step);
}

double upper_limit(const TransformerSpec &spec, const TransformerSeries &s,
                   int step) {
  return spec.max_power_kw - hold_at(s.dr, step);
}

double overload(const TransformerSpec &spec, const TransformerSeries &s,
                int step, double net_kw) {
  return std::max(net_kw - upper_limit(spec, s, step), 0.0);
}

double lower_violation(const TransformerSpec &spec, double net_kw) {
  return std::max(spec.min_power_kw - net_kw, 0.0);
}

std::vector<double> forecast(const std::vector<double> &truth, int step, int h,
                             double sigma, std::mt19937_64 &rng) {
  std::vector<double> out(h);
  std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
  for (int k = 0; k < h; ++k) {
    out[k] = hold_at(truth, step + k);
    if (sigma > 0.0)
      out[k] += noise(rng);
  }
  return out;
}

std::vector<double> visible_dr(const std::vector<double> &dr, int step, int h,
                               int notice_steps) {
  std::vector<double> out(h, 0.0);
  for (int k = 0; k < h && k <= notice_steps; ++k)
    out[k] = hold_at(dr, step + k);
  return out;
}

namespace {

double bump(double hour, double centre, double width) {
  double d = std::remainder(hour - centre, 24.0);
  return std::exp(-0.5 * d * d / (width * width));
}

double hour_at(const CalendarTime &start, int timescale_minutes, int t) {
  int minute = (start.minute_of_week() + t * timescale_minutes) % 10080;
  return (minute % 1440) / 60.0;
}

int day_at(const CalendarTime &start, int timescale_minutes, int t) {
  return (start.minute_of_week() + t * timescale_minutes) / 1440;
}

} // namespace

std::vector<double> builtin_load(const CalendarTime &start,
                                 int timescale_minutes, int length,
                                 double peak_kw, std::mt19937_64 &rng) {
  std::vector<double> out(length);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int t = 0; t < length; ++t) {
    double h = hour_at(start, timescale_minutes, t);
    double shape = 0.35 + 0.35 * bump(h, 8.0, 1.5) + 0.6 * bump(h, 19.0, 2.2);
    out[t] = std::max(0.0, peak_kw * std::min(shape, 1.0) * (1.0 + noise(rng)));
  }
  return out;
}

std::vector<double> builtin_pv(const CalendarTime &start, int timescale_minutes,
                               int length, double peak_kw,
                               std::mt19937_64 &rng) {
  std::vector<double> out(length);
  int day = -1;
  double clouds = 1.0;
  for (int t = 0; t < length; ++t) {
    int d = day_at(start, timescale_minutes, t);
    if (d != day) {
      day = d;
      clouds = 0.4 + 0.6 * uniform01(rng);
    }
    double h = hour_at(start, timescale_minutes, t);
    double sun = (h > 6.0 && h < 20.0)
                     ? std::pow(std::sin((h - 6.0) / 14.0 * std::numbers::pi),
                                2.0)
                     : 0.0;
    out[t] = -peak_kw * clouds * sun;
  }
  return out;
}

std::vector<double> dr_series(const std::optional<DrEvent> &dr, int length) {
  std::vector<double> out(length, 0.0);
  if (!dr)
    return out;
  int end = std::min(length, dr->start_step + dr->duration_steps);
  for (int t = std::max(0, dr->start_step); t < end; ++t)
    out[t] = dr->reduction_kw;
  return out;
}

std::vector<double> load_load_csv(const std::string &path,
                                  const CalendarTime &start,
                                  int timescale_minutes, int length) {
  auto cols = load_step_series(path, 1, start, timescale_minutes, length);
  return std::move(cols[0]);
}

std::vector<double> load_pv_csv(const std::string &path,
                                const CalendarTime &start,
                                int timescale_minutes, int length) {
  auto cols = load_step_series(path, 1, start, timescale_minutes, length);
  for (double &v : cols[0])
    v = -std::abs(v);
  return std::move(cols[0]);
}

} // namespace v2g::grid
