// SPDX-License-Identifier: Apache-2.0
// Small hand-made instances shared by the unit tests and the acceptance run.
#pragma once

#include "v2gsim/engine/config.hpp"
#include "v2gsim/engine/replay.hpp"
#include "v2gsim/engine/simulator.hpp"

#include <algorithm>
#include <vector>

namespace v2g::testing {

/// One single-EVSE AC charger on a transformer that never binds.
inline SimConfig single_evse_config(Problem problem, int sim_length,
                                    bool v2g = false) {
  SimConfig c = default_config();
  c.problem = problem;
  c.sim_length = sim_length;
  c.forecast_horizon = sim_length;
  c.v2g_enabled = v2g;
  c.setpoint_samples = 1;
  c.scenario = behavior::Scenario::Workplace;
  station::ChargerSpec cs;
  cs.id = "cs0";
  c.chargers = {cs};
  c.transformers.front().max_power_kw = 1000.0;
  c.transformers.front().min_power_kw = -1000.0;
  c.transformers.front().load_peak_kw = 0.0;
  c.transformers.front().pv_peak_kw = 0.0;
  c.transformers.front().dr.reset();
  return c;
}

inline ev::EvSpec linear_spec(double capacity, bool v2g) {
  ev::EvSpec s;
  s.model_name = "lin";
  s.max_capacity_kwh = capacity;
  s.min_capacity_kwh = 0.1 * capacity;
  s.max_ac_charge_kw = 22.0;
  s.max_discharge_kw = v2g ? 22.0 : 0.0;
  s.transition_soc = 1.0;
  s.sales_weight = 1;
  return s;
}

/// Replay of `cfg` whose schedule is exactly `sessions` and whose exogenous
/// series are replaced where the overrides are nonempty.
inline Replay make_replay(const SimConfig &cfg,
                          std::vector<ScheduledSession> sessions,
                          const std::vector<double> &setpoint = {},
                          const std::vector<double> &price = {}) {
  Simulator sim(cfg);
  sim.reset(0);
  Replay r = sim.replay();
  int id = 0;
  for (auto &s : sessions) {
    s.session.id = id++;
    s.session.energy_kwh = s.session.arrival_energy_kwh;
  }
  r.sessions = std::move(sessions);
  r.dropped.assign(cfg.sim_length, 0);
  auto extend = [&](const std::vector<double> &v) {
    std::vector<double> out(r.series.charge_price.size(), v.back());
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  };
  if (!setpoint.empty())
    r.series.setpoint = extend(setpoint);
  if (!price.empty()) {
    r.series.charge_price = extend(price);
    r.series.discharge_price = extend(price);
  }
  return r;
}

inline ScheduledSession session_at(int slot, const ev::EvSpec &spec,
                                   int arrival, int departure, double energy,
                                   double target) {
  ScheduledSession s;
  s.slot = slot;
  s.session.spec = spec;
  s.session.arrival_step = arrival;
  s.session.departure_step = departure;
  s.session.arrival_energy_kwh = energy;
  s.session.energy_kwh = energy;
  s.session.target_energy_kwh = target;
  return s;
}

/// Workplace profit setting with V2G-capable fleet and a DR event.
inline SimConfig profit_config(int chargers) {
  SimConfig c = default_config();
  c.problem = Problem::Profit;
  c.scenario = behavior::Scenario::Workplace;
  c.v2g_enabled = true;
  c.ev_spec_source = "custom";
  ev::EvSpec a;
  a.model_name = "A";
  a.max_capacity_kwh = 50.0;
  a.min_capacity_kwh = 5.0;
  a.max_ac_charge_kw = 11.0;
  a.max_discharge_kw = 11.0;
  a.sales_weight = 1;
  ev::EvSpec b = a;
  b.model_name = "B";
  b.max_capacity_kwh = 75.0;
  b.min_capacity_kwh = 7.5;
  c.custom_specs = {a, b};
  station::ChargerSpec cs;
  c.chargers = uniform_chargers(chargers, cs, 1);
  auto &tr = c.transformers.front();
  tr.max_power_kw = 150.0;
  tr.load_peak_kw = 30.0;
  tr.pv_peak_kw = 30.0;
  tr.dr = grid::DrEvent{40, 8, 20.0};
  tr.dr_notice_steps = 4;
  return c;
}

} // namespace v2g::testing
