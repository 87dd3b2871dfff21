// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/engine/config.hpp"
#include "v2gsim/engine/replay.hpp"

#include <optional>
#include <vector>

namespace v2g {
class Simulator;
}

namespace v2g::baselines {

/// One EV's controllable window, in problem-relative steps [start, end).
/// Currents follow the engine's sign convention (discharge negative).
struct SessionWindow {
  int session_id = -1;
  int slot = 0;
  int charger = 0;
  int start = 0;
  int end = 1;
  double energy_init_kwh = 0.0;
  double energy_min_kwh = 0.0;
  double energy_max_kwh = 0.0;
  std::optional<double> target_kwh; // required at `end`, if inside the horizon
  double ich_min = 0.0;  // semi-continuous lower bound (A)
  double ich_max = 0.0;
  double idis_min = 0.0; // dead-band edge, <= 0
  double idis_max = 0.0; // largest magnitude, <= 0; 0 disables discharge
  double kw_per_amp_ch = 0.0;
  double kw_per_amp_dis = 0.0;

  bool can_charge() const { return ich_max > 0.0; }
  bool can_discharge() const { return idis_max < 0.0; }
};

/// Clairvoyant or receding-horizon scheduling instance for either the
/// tracking or the profit objective.
struct ScheduleProblem {
  Problem kind = Problem::Pst;
  int horizon = 1;
  double dt_hours = 0.25;
  int slots = 0;
  std::vector<station::ChargerSpec> chargers;
  std::vector<SessionWindow> sessions;
  std::vector<double> setpoint;        // kW per step
  std::vector<double> charge_price;    // EUR/kWh per step
  std::vector<double> discharge_price;
  std::vector<int> charger_transformer;
  std::vector<std::vector<double>> base_kw;  // per transformer: load + PV
  std::vector<std::vector<double>> upper_kw; // usable upper limit after DR
  std::vector<std::vector<double>> lower_kw;
  /// Departure targets as (elastic) constraints in the tracking problem too.
  bool enforce_targets = false;
};

/// Per-pair current limits derived from charger and EV ratings. With
/// `cap_at_knee` false, charge-only sessions may be planned up to capacity.
SessionWindow make_window(const ev::EvSession &s, int slot, int charger,
                          const station::ChargerSpec &cs, bool v2g_enabled,
                          bool cap_at_knee = true);

/// Full-horizon instance built from a replay's realized schedule and series.
ScheduleProblem problem_from_replay(const Replay &replay, Problem kind);

/// Window [t, min(t + h, T)) of the live simulation: connected EVs only,
/// load and PV from the current forecasts, DR visible within its notice.
ScheduleProblem problem_from_state(const Simulator &sim, int h);

} // namespace v2g::baselines
