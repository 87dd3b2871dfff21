// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/baselines/schedule_problem.hpp"

#include "v2gsim/common/series.hpp"
#include "v2gsim/engine/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace v2g::baselines {

SessionWindow make_window(const ev::EvSession &s, int slot, int charger,
                          const station::ChargerSpec &cs, bool v2g_enabled,
                          bool cap_at_knee) {
  SessionWindow w;
  w.session_id = s.id;
  w.slot = slot;
  w.charger = charger;
  w.energy_init_kwh = s.energy_kwh;
  w.energy_min_kwh = s.spec.min_capacity_kwh;
  w.energy_max_kwh = s.spec.max_capacity_kwh;
  const double root = cs.voltage * std::sqrt(static_cast<double>(cs.phases)) / 1000.0;
  w.kw_per_amp_ch = s.spec.charge_efficiency * root;
  w.kw_per_amp_dis = s.spec.discharge_efficiency * root;

  w.ich_max = std::min({cs.max_charge_current, cs.max_station_current,
                        s.spec.max_charge_kw(cs.type) / w.kw_per_amp_ch});
  w.ich_min = std::max(cs.min_charge_current,
                       s.spec.min_charge_kw(cs.type) / w.kw_per_amp_ch);
  if (!(w.ich_max > 0.0) || w.ich_min > w.ich_max)
    w.ich_max = w.ich_min = 0.0;
  if (v2g_enabled && s.spec.can_discharge() && cs.max_discharge_current < 0.0 &&
      cs.min_station_current < 0.0) {
    w.idis_max = std::max({cs.max_discharge_current, cs.min_station_current,
                           -s.spec.max_discharge_kw / w.kw_per_amp_dis});
    w.idis_min = std::min(cs.min_discharge_current,
                          -s.spec.min_discharge_kw / w.kw_per_amp_dis);
    if (w.idis_min < w.idis_max)
      w.idis_max = w.idis_min = 0.0;
  }
  // Linear bookkeeping holds below the CC/CV knee only. Charge-only
  // sessions may be planned past it when `cap_at_knee` is false.
  const bool can_discharge = w.idis_max < 0.0;
  const double knee = s.spec.transition_soc * s.spec.max_capacity_kwh;
  if (s.spec.transition_soc < 1.0 && (cap_at_knee || can_discharge)) {
    if (s.energy_kwh >= knee) {
      w.ich_max = w.ich_min = 0.0;
      w.energy_max_kwh = s.energy_kwh;
    } else {
      w.energy_max_kwh = knee;
    }
  }
  return w;
}

namespace {

void fill_common(ScheduleProblem &p, const SimConfig &cfg) {
  p.dt_hours = cfg.dt_hours();
  p.chargers = cfg.chargers;
  for (const auto &c : cfg.chargers)
    p.charger_transformer.push_back(c.transformer);
  p.slots = cfg.total_evse();
}

std::vector<int> slot_chargers(const SimConfig &cfg) {
  std::vector<int> out;
  for (std::size_t c = 0; c < cfg.chargers.size(); ++c)
    for (int j = 0; j < cfg.chargers[c].evse_count; ++j)
      out.push_back(static_cast<int>(c));
  return out;
}

} // namespace

ScheduleProblem problem_from_replay(const Replay &replay, Problem kind) {
  const auto &cfg = replay.config;
  ScheduleProblem p;
  p.kind = kind;
  p.horizon = cfg.sim_length;
  fill_common(p, cfg);
  const auto sc = slot_chargers(cfg);
  for (const auto &s : replay.sessions) {
    const int c = sc.at(s.slot);
    auto w = make_window(s.session, s.slot, c, cfg.chargers[c], cfg.v2g_enabled,
                         kind != Problem::Pst);
    w.start = s.session.arrival_step;
    w.end = std::min(s.session.departure_step, p.horizon);
    w.target_kwh = s.session.target_energy_kwh;
    p.sessions.push_back(w);
  }
  const int T = p.horizon;
  for (int t = 0; t < T; ++t) {
    p.setpoint.push_back(hold_at(replay.series.setpoint, t));
    p.charge_price.push_back(hold_at(replay.series.charge_price, t));
    p.discharge_price.push_back(hold_at(replay.series.discharge_price, t));
  }
  for (std::size_t w = 0; w < cfg.transformers.size(); ++w) {
    const auto &tr = cfg.transformers[w];
    const auto &s = replay.series.transformers[w];
    std::vector<double> base(T), up(T), lo(T);
    for (int t = 0; t < T; ++t) {
      base[t] = hold_at(s.load, t) + hold_at(s.pv, t);
      up[t] = tr.max_power_kw - hold_at(s.dr, t);
      lo[t] = tr.min_power_kw;
    }
    p.base_kw.push_back(std::move(base));
    p.upper_kw.push_back(std::move(up));
    p.lower_kw.push_back(std::move(lo));
  }
  return p;
}

ScheduleProblem problem_from_state(const Simulator &sim, int h) {
  const auto &cfg = sim.config();
  const int t0 = sim.t();
  ScheduleProblem p;
  p.kind = Problem::Profit;
  p.horizon = std::max(1, std::min(h, cfg.sim_length - t0));
  fill_common(p, cfg);
  for (int k = 0; k < sim.slot_count(); ++k) {
    const auto &s = sim.session(k);
    if (!s)
      continue;
    const int c = sim.charger_index(k);
    auto w = make_window(*s, k, c, cfg.chargers[c], cfg.v2g_enabled);
    w.start = 0;
    w.end = std::min(s->departure_step - t0, p.horizon);
    if (s->departure_step - t0 <= p.horizon)
      w.target_kwh = s->target_energy_kwh;
    p.sessions.push_back(w);
  }
  for (int k = 0; k < p.horizon; ++k) {
    p.setpoint.push_back(hold_at(sim.series().setpoint, t0 + k));
    p.charge_price.push_back(hold_at(sim.series().charge_price, t0 + k));
    p.discharge_price.push_back(hold_at(sim.series().discharge_price, t0 + k));
  }
  for (std::size_t w = 0; w < cfg.transformers.size(); ++w) {
    const auto &tr = cfg.transformers[w];
    const auto &f = sim.net_forecasts()[w];
    auto dr = grid::visible_dr(sim.series().transformers[w].dr, t0, p.horizon,
                               tr.dr_notice_steps);
    std::vector<double> base(p.horizon), up(p.horizon), lo(p.horizon);
    for (int k = 0; k < p.horizon; ++k) {
      base[k] = hold_at(f, k);
      up[k] = tr.max_power_kw - dr[k];
      lo[k] = tr.min_power_kw;
    }
    p.base_kw.push_back(std::move(base));
    p.upper_kw.push_back(std::move(up));
    p.lower_kw.push_back(std::move(lo));
  }
  return p;
}

} // namespace v2g::baselines
