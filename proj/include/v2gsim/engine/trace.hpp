// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/ev/ev_model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace v2g {

/// Per-slot adjustment flags recorded in the trace (station flags occupy
/// the low bits, see station::LimitFlag).
enum TraceFlag : std::uint8_t {
  kActionClamped = 1u << 3,
  kEvLimited = 1u << 4,
  kEvSnapped = 1u << 5,
  kDischargeRefused = 1u << 6,
  kFallback = 1u << 7, // controller fell back to a heuristic this step
};

struct DepartureRecord {
  int session_id = -1;
  int slot = -1;
  int arrival_step = 0;
  int departure_step = 0;
  double capacity_kwh = 0.0;
  double arrival_energy_kwh = 0.0;
  double energy_kwh = 0.0;
  double target_energy_kwh = 0.0;
  ev::Degradation degradation;

  /// min(SoC / SoC*, 1).
  double satisfaction() const;
};

/// Everything that happened during one step, in slot order
/// (charger index, EVSE index).
struct StepRecord {
  int t = 0;
  std::vector<double> actions;
  std::vector<double> requested_amps;
  std::vector<double> amps;
  std::vector<double> power_kw; // delivered, (E_after - E_before) / dt
  std::vector<std::uint8_t> flags;
  std::vector<int> session_ids; // -1 for an empty slot
  std::vector<double> charger_amps;
  std::vector<double> transformer_kw;
  std::vector<double> overload_kw;
  std::vector<double> lower_violation_kw;
  double total_ev_kw = 0.0;
  double setpoint_kw = 0.0;
  double charge_price = 0.0;
  double discharge_price = 0.0;
  double cashflow = 0.0;
  double reward = 0.0;
  std::vector<DepartureRecord> departures;
  int dropped_arrivals = 0; // arrivals for t+1 that found no free EVSE
};

struct SimTrace {
  double dt_hours = 0.25;
  bool has_setpoint = true;
  std::vector<StepRecord> steps;

  std::vector<DepartureRecord> departures() const;
};

} // namespace v2g
