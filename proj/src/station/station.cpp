// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/station/station.hpp"

#include "v2gsim/common/errors.hpp"
#include "v2gsim/common/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace v2g::station {

double ChargerSpec::kw_per_amp() const {
  return voltage * std::sqrt(static_cast<double>(phases)) / 1000.0;
}

void ChargerSpec::validate(const std::string &field) const {
  auto fail = [&](const char *name, const char *msg) {
    throw ConfigError(field + "." + name, msg);
  };
  if (evse_count < 1)
    fail("evse_count", "must be at least 1");
  if (!(voltage > 0.0))
    fail("voltage", "must be positive");
  if (phases != 1 && phases != 3)
    fail("phases", "must be 1 or 3");
  if (!(min_charge_current >= 0.0 && min_charge_current <= max_charge_current))
    fail("min_charge_current", "must satisfy 0 <= min <= max");
  if (!(max_discharge_current <= min_discharge_current &&
        min_discharge_current <= 0.0))
    fail("max_discharge_current",
         "discharge bounds must satisfy max <= min <= 0");
  if (!(min_station_current <= 0.0 && max_station_current >= 0.0))
    fail("max_station_current",
         "station bounds must satisfy min <= 0 <= max");
}

DecodedAction decode_action(double action, const ChargerSpec &spec,
                            bool occupied, ActionRange range) {
  DecodedAction out;
  const double lo = range == ActionRange::Unipolar ? 0.0 : -1.0;
  double a = action;
  if (std::isnan(a)) {
    a = 0.0;
    out.clamped = true;
  } else if (a < lo || a > 1.0) {
    a = std::clamp(a, lo, 1.0);
    out.clamped = true;
  }
  if (!occupied)
    return out;
  if (a > 0.0)
    out.amps = a * spec.max_charge_current;
  else if (a < 0.0)
    out.amps = -a * spec.max_discharge_current;
  return out;
}

double encode_current(double amps, const ChargerSpec &spec) {
  if (amps > 0.0 && spec.max_charge_current > 0.0) {
    double a = std::min(1.0, amps / spec.max_charge_current);
    while (a < 1.0 && a * spec.max_charge_current < amps)
      a = std::nextafter(a, 2.0);
    return a;
  }
  if (amps < 0.0 && spec.max_discharge_current < 0.0) {
    double a = std::max(-1.0, -amps / spec.max_discharge_current);
    while (a > -1.0 && -a * spec.max_discharge_current > amps)
      a = std::nextafter(a, -2.0);
    return a;
  }
  return 0.0;
}

StationLimits apply_station_limits(std::span<const double> requested,
                                   const ChargerSpec &spec) {
  StationLimits out;
  out.currents.assign(requested.begin(), requested.end());
  out.flags.assign(requested.size(), 0);
  auto in_dead_band = [&](double i) {
    return (i > 0.0 && i < spec.min_charge_current) ||
           (i < 0.0 && i > spec.min_discharge_current);
  };

  double pos = 0.0;
  double neg = 0.0;
  for (std::size_t j = 0; j < out.currents.size(); ++j) {
    double &i = out.currents[j];
    if (in_dead_band(i)) {
      i = 0.0;
      out.flags[j] |= kDeadBand;
    } else if (i > spec.max_charge_current) {
      i = spec.max_charge_current;
      out.flags[j] |= kClipped;
    } else if (i < spec.max_discharge_current) {
      i = spec.max_discharge_current;
      out.flags[j] |= kClipped;
    }
    (i > 0.0 ? pos : neg) += i;
  }

  const double total = pos + neg;
  bool scale_pos = false;
  bool scale_neg = false;
  if (total > spec.max_station_current && pos > 0.0) {
    out.scale = (spec.max_station_current - neg) / pos;
    scale_pos = true;
  } else if (total < spec.min_station_current && neg < 0.0) {
    out.scale = (spec.min_station_current - pos) / neg;
    scale_neg = true;
  }
  if (scale_pos || scale_neg) {
    for (std::size_t j = 0; j < out.currents.size(); ++j) {
      double &i = out.currents[j];
      if ((scale_pos && i > 0.0) || (scale_neg && i < 0.0)) {
        i *= out.scale;
        out.flags[j] |= kNormalized;
        if (in_dead_band(i)) {
          i = 0.0;
          out.flags[j] |= kDeadBand;
        }
      }
    }
  }
  return out;
}

double session_cashflow(double power_kw, double dt_hours, double charge_price,
                        double discharge_price) {
  if (power_kw > 0.0)
    return -power_kw * charge_price * dt_hours;
  if (power_kw < 0.0)
    return -power_kw * discharge_price * dt_hours;
  return 0.0;
}

namespace {

double tariff(double hour, bool weekend) {
  using std::numbers::pi;
  auto bump = [](double h, double centre, double width) {
    double d = std::remainder(h - centre, 24.0);
    return std::exp(-0.5 * d * d / (width * width));
  };
  double p = 0.16 + 0.09 * bump(hour, 8.0, 1.6) + 0.13 * bump(hour, 19.0, 2.0) -
             0.06 * bump(hour, 13.5, 2.2) - 0.04 * bump(hour, 3.5, 2.5);
  p += 0.01 * std::sin(2.0 * pi * hour / 24.0);
  if (weekend)
    p -= 0.03;
  return std::max(p, 0.02);
}

} // namespace

PriceSeries builtin_prices(const CalendarTime &start, int timescale_minutes,
                           int length, double discharge_price_factor) {
  PriceSeries out;
  out.charge.resize(length);
  out.discharge.resize(length);
  const int mow = start.minute_of_week();
  for (int t = 0; t < length; ++t) {
    int minute = (mow + t * timescale_minutes) % 10080;
    double hour = (minute % 1440) / 60.0;
    bool weekend = minute / 1440 >= 5;
    // Day-ahead prices are hourly: hold within the hour.
    double p = tariff(std::floor(hour), weekend);
    out.charge[t] = p;
    out.discharge[t] = p * discharge_price_factor;
  }
  return out;
}

PriceSeries load_price_csv(const std::string &path, const CalendarTime &start,
                           int timescale_minutes, int length) {
  auto cols = load_step_series(path, 2, start, timescale_minutes, length);
  for (const auto &col : cols)
    for (double v : col)
      if (!std::isfinite(v))
        throw DataError(path + ": non-finite price");
  return {std::move(cols[0]), std::move(cols[1])};
}

} // namespace v2g::station
