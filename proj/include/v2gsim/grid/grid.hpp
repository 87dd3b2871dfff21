// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/common/calendar.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace v2g::grid {

struct DrEvent {
  int start_step = 0;
  int duration_steps = 0;
  double reduction_kw = 0.0;
  bool operator==(const DrEvent &) const = default;
};

/// Static transformer description. Series sources are either a CSV path or
/// the built-in synthetic profile scaled by the *_peak_kw fields.
struct TransformerSpec {
  std::string id;
  double min_power_kw = -100.0;
  double max_power_kw = 100.0;
  double load_peak_kw = 0.0;
  double pv_peak_kw = 0.0;
  std::string load_csv;
  std::string pv_csv;
  std::optional<DrEvent> dr;
  int dr_notice_steps = 1;

  void validate(const std::string &field) const;
  bool operator==(const TransformerSpec &) const = default;
};

/// Realized exogenous series for one transformer. PV is stored as negative
/// power. Lengths cover the simulation plus the forecast horizon.
struct TransformerSeries {
  std::vector<double> load;
  std::vector<double> pv;
  std::vector<double> dr;
  bool operator==(const TransformerSeries &) const = default;
};

/// P_EV + P_load + P_pv at `step`.
double net_power(const TransformerSeries &s, int step, double ev_kw);

/// Usable upper limit at `step` after the demand-response reduction.
double upper_limit(const TransformerSpec &spec, const TransformerSeries &s,
                   int step);

/// max(net - (P_max - P_dr), 0).
double overload(const TransformerSpec &spec, const TransformerSeries &s,
                int step, double net_kw);

/// max(P_min - net, 0); diagnostic only.
double lower_violation(const TransformerSpec &spec, double net_kw);

/// Entries truth[step + k] + N(0, sigma) for k in [0, h). Past the end the
/// last value is held. sigma = 0 draws nothing and returns the truth.
std::vector<double> forecast(const std::vector<double> &truth, int step, int h,
                             double sigma, std::mt19937_64 &rng);

/// DR reduction as seen by a controller: exact within the notice lead,
/// zero beyond it.
std::vector<double> visible_dr(const std::vector<double> &dr, int step, int h,
                               int notice_steps);

/// Inflexible household/commercial load in kW with morning and evening
/// peaks, scaled to `peak_kw`, with 5% multiplicative noise from `rng`.
std::vector<double> builtin_load(const CalendarTime &start,
                                 int timescale_minutes, int length,
                                 double peak_kw, std::mt19937_64 &rng);

/// Solar generation as negative kW: a bell between 06:00 and 20:00 scaled
/// to `peak_kw`, with a daily cloudiness factor drawn from `rng`.
std::vector<double> builtin_pv(const CalendarTime &start, int timescale_minutes,
                               int length, double peak_kw,
                               std::mt19937_64 &rng);

std::vector<double> dr_series(const std::optional<DrEvent> &dr, int length);

/// CSV columns: step_or_timestamp,kW.
std::vector<double> load_load_csv(const std::string &path,
                                  const CalendarTime &start,
                                  int timescale_minutes, int length);

/// Same layout; generation may be given positive and is stored negated.
std::vector<double> load_pv_csv(const std::string &path,
                                const CalendarTime &start,
                                int timescale_minutes, int length);

} // namespace v2g::grid
