// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/ev/ev_model.hpp"

#include "v2gsim/common/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace v2g::ev {

void EvSpec::validate() const {
  auto fail = [](const char *field, const std::string &msg) {
    throw ConfigError(std::string("ev.") + field, msg);
  };
  if (!(max_capacity_kwh > 0.0))
    fail("max_capacity_kwh", "must be positive");
  if (!(min_capacity_kwh >= 0.0 && min_capacity_kwh < max_capacity_kwh))
    fail("min_capacity_kwh", "must satisfy 0 <= min < max capacity");
  if (!(min_ac_charge_kw >= 0.0 && min_ac_charge_kw <= max_ac_charge_kw))
    fail("min_ac_charge_kw", "must satisfy 0 <= min <= max");
  if (!(min_dc_charge_kw >= 0.0 && min_dc_charge_kw <= max_dc_charge_kw))
    fail("min_dc_charge_kw", "must satisfy 0 <= min <= max");
  if (!(min_discharge_kw >= 0.0 && min_discharge_kw <= max_discharge_kw))
    fail("min_discharge_kw", "must satisfy 0 <= min <= max");
  if (!(charge_efficiency > 0.0 && charge_efficiency <= 1.0))
    fail("charge_efficiency", "must lie in (0, 1]");
  if (!(discharge_efficiency > 0.0 && discharge_efficiency <= 1.0))
    fail("discharge_efficiency", "must lie in (0, 1]");
  if (!(transition_soc > 0.0 && transition_soc <= 1.0))
    fail("transition_soc", "must lie in (0, 1]");
  if (sales_weight < 0)
    fail("sales_weight", "must be nonnegative");
}

double power_from_current(double amps, double volts, int phases,
                          double efficiency) {
  return efficiency * amps * volts * std::sqrt(static_cast<double>(phases)) /
         1000.0;
}

double current_from_power(double kw, double volts, int phases,
                          double efficiency) {
  return kw * 1000.0 /
         (efficiency * volts * std::sqrt(static_cast<double>(phases)));
}

double step_energy(const EvSpec &spec, double energy_kwh, double power_kw,
                   double dt_hours) {
  const double cap = spec.max_capacity_kwh;
  const double soc = energy_kwh / cap;
  const double tau = spec.transition_soc;
  double next;
  if (power_kw <= 0.0 || tau >= 1.0 || soc < tau) {
    next = energy_kwh + power_kw * dt_hours;
  } else {
    double factor = std::exp(power_kw * dt_hours / (cap * (tau - 1.0)));
    next = cap * (1.0 + (soc - 1.0) * factor);
  }
  return std::clamp(next, spec.min_capacity_kwh, cap);
}

double step_soc(const EvSession &session, double power_kw, double dt_hours) {
  return step_energy(session.spec, session.energy_kwh, power_kw, dt_hours) /
         session.spec.max_capacity_kwh;
}

PowerClamp clamp_ev_power(const EvSession &session, double requested_kw,
                          ChargeMode mode, double dt_hours) {
  const EvSpec &s = session.spec;
  PowerClamp out;
  if (requested_kw > 0.0) {
    double p = requested_kw;
    if (p > s.max_charge_kw(mode)) {
      p = s.max_charge_kw(mode);
      out.limited = true;
    }
    if (p < s.min_charge_kw(mode)) {
      out.snapped = true;
      return out;
    }
    // Above the knee step_energy approaches the capacity on its own.
    const bool tapering = s.transition_soc < 1.0 &&
                          session.energy_kwh >= s.transition_soc * s.max_capacity_kwh;
    double headroom =
        std::max(0.0, (s.max_capacity_kwh - session.energy_kwh) / dt_hours);
    if (!tapering && p > headroom) {
      p = headroom;
      out.limited = true;
    }
    out.kw = p;
  } else if (requested_kw < 0.0) {
    if (!s.can_discharge()) {
      out.refused = true;
      return out;
    }
    double mag = -requested_kw;
    if (mag > s.max_discharge_kw) {
      mag = s.max_discharge_kw;
      out.limited = true;
    }
    if (mag < s.min_discharge_kw) {
      out.snapped = true;
      return out;
    }
    double reserve =
        std::max(0.0, (session.energy_kwh - s.min_capacity_kwh) / dt_hours);
    if (mag > reserve) {
      mag = reserve;
      out.limited = true;
    }
    out.kw = -mag;
  }
  return out;
}

double calendar_loss(double avg_soc, double days, double age_days,
                     const DegradationParams &p) {
  const double kelvin = p.temperature_c + 273.15;
  double linear = p.e0 * avg_soc - p.e1;
  if (linear <= 0.0)
    return 0.0;
  return 0.75 * linear * std::exp(-p.e2 / kelvin) * days /
         std::pow(age_days, 0.25);
}

double cyclic_loss(std::span<const double> soc_series,
                   std::span<const double> power_series, double dt_hours,
                   const DegradationParams &p) {
  if (soc_series.empty() || power_series.empty())
    return 0.0;
  const double n = static_cast<double>(soc_series.size());
  const double avg =
      std::accumulate(soc_series.begin(), soc_series.end(), 0.0) / n;
  const double dt_days = dt_hours / 24.0;
  const double span_days = n * dt_days;
  double deviation = 0.0;
  for (double s : soc_series)
    deviation += std::abs(avg - s) * dt_days;
  double throughput = 0.0;
  for (double kw : power_series)
    throughput += std::abs(kw) * dt_hours;
  return (p.z0 + p.z1 * deviation / span_days) * throughput /
         std::sqrt(p.lifetime_throughput_kwh);
}

Degradation total_degradation(const EvSession &session, double dt_hours,
                              const DegradationParams &p) {
  Degradation d;
  const auto &socs = session.soc_history;
  if (socs.empty())
    return d;
  double avg = std::accumulate(socs.begin(), socs.end(), 0.0) /
               static_cast<double>(socs.size());
  double days = static_cast<double>(socs.size()) * dt_hours / 24.0;
  d.calendar = calendar_loss(avg, days, session.battery_age_days, p);
  d.cyclic = cyclic_loss(socs, session.power_history, dt_hours, p);
  return d;
}

} // namespace v2g::ev
