// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/engine/simulator.hpp"

#include "v2gsim/common/errors.hpp"
#include "v2gsim/rl/rewards.hpp"

#include <algorithm>
#include <stdexcept>

namespace v2g {

double DepartureRecord::satisfaction() const {
  if (!(target_energy_kwh > 0.0))
    return 1.0;
  return std::min(energy_kwh / target_energy_kwh, 1.0);
}

std::vector<DepartureRecord> SimTrace::departures() const {
  std::vector<DepartureRecord> out;
  for (const auto &s : steps)
    out.insert(out.end(), s.departures.begin(), s.departures.end());
  return out;
}

Simulator::Simulator(SimConfig config) : config_(std::move(config)) {
  config_.validate();
  registry_ = resolve_registry(config_);
  if (registry_.empty())
    throw ConfigError("ev.registry", "no EV specs available");
  behavior_ = resolve_behavior(config_);
  target_rule_ = behavior::default_target_rule(behavior_.desired_soc);
  for (std::size_t c = 0; c < config_.chargers.size(); ++c) {
    offsets_.push_back(static_cast<int>(slot_charger_.size()));
    for (int j = 0; j < config_.chargers[c].evse_count; ++j)
      slot_charger_.push_back(static_cast<int>(c));
  }
  offsets_.push_back(static_cast<int>(slot_charger_.size()));
  slots_.assign(slot_charger_.size(), std::nullopt);
  full_.assign(slot_charger_.size(), 0.0);
}

station::ActionRange Simulator::action_range() const {
  return config_.problem == Problem::Pst ? station::ActionRange::Unipolar
                                         : station::ActionRange::Bipolar;
}

double Simulator::previous_total_kw() const {
  return trace_.steps.empty() ? 0.0 : trace_.steps.back().total_ev_kw;
}

void Simulator::build_series() {
  const int len = config_.sim_length + config_.forecast_horizon;
  const int dt = config_.timescale_minutes;
  series_ = {};
  station::PriceSeries prices =
      config_.price_source.empty() || config_.price_source == "builtin"
          ? station::builtin_prices(config_.start, dt, len,
                                    config_.discharge_price_factor)
          : station::load_price_csv(config_.price_source, config_.start, dt,
                                    len);
  series_.charge_price = std::move(prices.charge);
  series_.discharge_price = std::move(prices.discharge);
  for (const auto &tr : config_.transformers) {
    grid::TransformerSeries s;
    s.load = tr.load_csv.empty()
                 ? grid::builtin_load(config_.start, dt, len, tr.load_peak_kw,
                                      rng_.loads())
                 : grid::load_load_csv(tr.load_csv, config_.start, dt, len);
    s.pv = tr.pv_csv.empty()
               ? grid::builtin_pv(config_.start, dt, len, tr.pv_peak_kw,
                                  rng_.loads())
               : grid::load_pv_csv(tr.pv_csv, config_.start, dt, len);
    s.dr = grid::dr_series(tr.dr, len);
    series_.transformers.push_back(std::move(s));
  }
  series_.setpoint = expected_demand_kw(config_, behavior_, registry_,
                                        config_.setpoint_samples,
                                        rng_.setpoint());
  for (double &p : series_.setpoint)
    p *= config_.setpoint_multiplier;
}

void Simulator::draw_forecasts() {
  forecasts_.clear();
  for (const auto &s : series_.transformers) {
    std::vector<double> net(s.load.size());
    for (std::size_t k = 0; k < net.size(); ++k)
      net[k] = s.load[k] + (k < s.pv.size() ? s.pv[k] : 0.0);
    forecasts_.push_back(grid::forecast(net, t_, config_.forecast_horizon,
                                        config_.forecast_sigma,
                                        rng_.forecasts()));
  }
}

void Simulator::reset(std::uint64_t seed) {
  rng_ = RngStreams(seed);
  replaying_ = false;
  schedule_.clear();
  schedule_cursor_ = 0;
  dropped_.assign(config_.sim_length, 0);
  next_id_ = 0;
  t_ = 0;
  slots_.assign(slot_charger_.size(), std::nullopt);
  full_.assign(slot_charger_.size(), 0.0);
  trace_ = {};
  trace_.dt_hours = config_.dt_hours();
  trace_.has_setpoint = config_.problem == Problem::Pst;
  departed_.clear();
  build_series();
  draw_forecasts();
}

void Simulator::reset(const Replay &replay) {
  if (replay.format_version != kReplayFormatVersion)
    throw ReplayError("unsupported replay format_version " +
                      std::to_string(replay.format_version));
  if (!(replay.config == config_))
    throw ReplayError("replay was recorded with a different configuration");
  rng_ = RngStreams(replay.seed);
  replaying_ = true;
  schedule_ = replay.sessions;
  schedule_cursor_ = 0;
  dropped_ = replay.dropped;
  dropped_.resize(config_.sim_length, 0);
  next_id_ = 0;
  t_ = 0;
  slots_.assign(slot_charger_.size(), std::nullopt);
  full_.assign(slot_charger_.size(), 0.0);
  trace_ = {};
  trace_.dt_hours = config_.dt_hours();
  trace_.has_setpoint = config_.problem == Problem::Pst;
  departed_.clear();
  series_ = replay.series;
  for (const auto &s : schedule_)
    if (s.slot < 0 || s.slot >= slot_count())
      throw ReplayError("replay session references slot " +
                        std::to_string(s.slot) + " outside the topology");
  draw_forecasts();
}

void Simulator::place_arrivals(int step) {
  if (step >= config_.sim_length)
    return;
  if (replaying_) {
    while (schedule_cursor_ < schedule_.size() &&
           schedule_[schedule_cursor_].session.arrival_step <= step) {
      const auto &s = schedule_[schedule_cursor_++];
      if (s.session.arrival_step != step || slots_[s.slot])
        throw ReplayError("replay schedule conflicts with slot occupancy");
      slots_[s.slot] = s.session;
      full_[s.slot] = 0.5;
    }
    return;
  }
  std::vector<behavior::FreeSlot> free;
  for (int k = 0; k < slot_count(); ++k)
    if (!slots_[k])
      free.push_back({k, &charger_of(k)});
  behavior::ArrivalContext ctx;
  ctx.arrival_step = step;
  ctx.sim_length = config_.sim_length;
  ctx.timescale_minutes = config_.timescale_minutes;
  ctx.start = config_.start;
  ctx.total_evse = slot_count();
  ctx.battery_age_days = config_.battery_age_days;
  auto draw = behavior::sample_arrivals(behavior_, registry_, free, ctx,
                                        target_rule_, rng_.arrivals(),
                                        rng_.specs());
  dropped_[step - 1] = draw.dropped;
  for (auto &p : draw.sessions) {
    p.session.id = next_id_++;
    schedule_.push_back({p.slot, p.session});
    slots_[p.slot] = std::move(p.session);
    full_[p.slot] = 0.5;
  }
}

const StepRecord &Simulator::step(std::span<const double> actions,
                                  std::uint8_t controller_flags) {
  if (done())
    throw SimulationError("step called on a finished simulation");
  const int n = slot_count();
  if (static_cast<int>(actions.size()) != n)
    throw std::invalid_argument("expected " + std::to_string(n) +
                                " actions, got " +
                                std::to_string(actions.size()));
  const double dt = config_.dt_hours();
  StepRecord r;
  r.t = t_;
  r.actions.assign(actions.begin(), actions.end());
  r.requested_amps.assign(n, 0.0);
  r.amps.assign(n, 0.0);
  r.power_kw.assign(n, 0.0);
  r.flags.assign(n, controller_flags);
  r.session_ids.assign(n, -1);

  const auto range = action_range();
  for (int k = 0; k < n; ++k) {
    auto d = station::decode_action(actions[k], charger_of(k),
                                    slots_[k].has_value(), range);
    if (d.clamped)
      r.flags[k] |= kActionClamped;
    if (d.amps < 0.0 && !config_.v2g_enabled) {
      d.amps = 0.0;
      r.flags[k] |= kDischargeRefused;
    }
    r.requested_amps[k] = d.amps;
    if (slots_[k])
      r.session_ids[k] = slots_[k]->id;
  }

  const int nc = static_cast<int>(config_.chargers.size());
  r.charger_amps.assign(nc, 0.0);
  for (int c = 0; c < nc; ++c) {
    const int b = offsets_[c], e = offsets_[c + 1];
    auto lim = station::apply_station_limits(
        std::span<const double>(r.requested_amps).subspan(b, e - b),
        config_.chargers[c]);
    for (int k = b; k < e; ++k) {
      r.amps[k] = lim.currents[k - b];
      r.flags[k] |= lim.flags[k - b];
      r.charger_amps[c] += r.amps[k];
    }
  }

  for (int k = 0; k < n; ++k) {
    if (!slots_[k])
      continue;
    auto &s = *slots_[k];
    const auto &ch = charger_of(k);
    const double eta = r.amps[k] >= 0.0 ? s.spec.charge_efficiency
                                        : s.spec.discharge_efficiency;
    double p = ev::power_from_current(r.amps[k], ch.voltage, ch.phases, eta);
    auto cl = ev::clamp_ev_power(s, p, ch.type, dt);
    if (cl.limited)
      r.flags[k] |= kEvLimited;
    if (cl.snapped)
      r.flags[k] |= kEvSnapped;
    if (cl.refused)
      r.flags[k] |= kDischargeRefused;
    const double before = s.energy_kwh;
    const double after = ev::step_energy(s.spec, before, cl.kw, dt);
    const double delivered = (after - before) / dt;
    s.soc_history.push_back(s.soc());
    s.power_history.push_back(delivered);
    s.energy_kwh = after;
    r.power_kw[k] = delivered;
    if (r.requested_amps[k] > 0.0 && r.amps[k] > 0.0 && after == before)
      full_[k] = 1.0;
  }

  const int nw = static_cast<int>(config_.transformers.size());
  std::vector<double> ev_kw(nw, 0.0);
  for (int k = 0; k < n; ++k) {
    ev_kw[charger_of(k).transformer] += r.power_kw[k];
    r.total_ev_kw += r.power_kw[k];
  }
  for (int w = 0; w < nw; ++w) {
    const auto &spec = config_.transformers[w];
    const auto &s = series_.transformers[w];
    double net = grid::net_power(s, t_, ev_kw[w]);
    r.transformer_kw.push_back(net);
    r.overload_kw.push_back(grid::overload(spec, s, t_, net));
    r.lower_violation_kw.push_back(grid::lower_violation(spec, net));
  }
  r.setpoint_kw = series_.setpoint.empty() ? 0.0 : series_.setpoint[t_];
  r.charge_price = series_.charge_price[t_];
  r.discharge_price = series_.discharge_price[t_];
  for (int k = 0; k < n; ++k)
    r.cashflow += station::session_cashflow(r.power_kw[k], dt, r.charge_price,
                                            r.discharge_price);

  for (int k = 0; k < n; ++k) {
    if (!slots_[k] || slots_[k]->departure_step != t_ + 1)
      continue;
    auto &s = *slots_[k];
    DepartureRecord d;
    d.session_id = s.id;
    d.slot = k;
    d.arrival_step = s.arrival_step;
    d.departure_step = s.departure_step;
    d.capacity_kwh = s.spec.max_capacity_kwh;
    d.arrival_energy_kwh = s.arrival_energy_kwh;
    d.energy_kwh = s.energy_kwh;
    d.target_energy_kwh = s.target_energy_kwh;
    d.degradation = ev::total_degradation(s, dt, config_.degradation);
    r.departures.push_back(d);
    departed_.push_back(std::move(s));
    slots_[k].reset();
    full_[k] = 0.0;
  }

  place_arrivals(t_ + 1);
  r.dropped_arrivals = dropped_[t_];

  r.reward = config_.problem == Problem::Pst ? rl::reward_pst(r)
                                             : rl::reward_profit(r, dt);
  trace_.steps.push_back(std::move(r));
  ++t_;
  draw_forecasts();
  return trace_.steps.back();
}

Replay Simulator::replay() const {
  Replay r;
  r.config = config_;
  r.seed = rng_.seed();
  r.sessions = schedule_;
  r.series = series_;
  r.dropped = dropped_;
  return r;
}

std::vector<double> expected_demand_kw(const SimConfig &cfg,
                                       const behavior::BehaviorModel &model,
                                       const std::vector<ev::EvSpec> &registry,
                                       int samples, std::mt19937_64 &rng) {
  const int T = cfg.sim_length;
  const double dt = cfg.dt_hours();
  std::vector<const station::ChargerSpec *> slot_charger;
  for (const auto &c : cfg.chargers)
    for (int j = 0; j < c.evse_count; ++j)
      slot_charger.push_back(&c);
  const int n = static_cast<int>(slot_charger.size());
  auto rule = behavior::default_target_rule(model.desired_soc);
  std::vector<double> demand(T, 0.0);
  for (int k = 0; k < samples; ++k) {
    std::vector<int> busy_until(n, 0);
    for (int step = 1; step < T; ++step) {
      std::vector<behavior::FreeSlot> free;
      for (int s = 0; s < n; ++s)
        if (busy_until[s] <= step)
          free.push_back({s, slot_charger[s]});
      behavior::ArrivalContext ctx;
      ctx.arrival_step = step;
      ctx.sim_length = T;
      ctx.timescale_minutes = cfg.timescale_minutes;
      ctx.start = cfg.start;
      ctx.total_evse = n;
      ctx.battery_age_days = cfg.battery_age_days;
      auto draw =
          behavior::sample_arrivals(model, registry, free, ctx, rule, rng, rng);
      for (const auto &p : draw.sessions) {
        const auto &s = p.session;
        busy_until[p.slot] = s.departure_step;
        const int stay = s.departure_step - s.arrival_step;
        const double kw =
            (s.target_energy_kwh - s.arrival_energy_kwh) / (stay * dt);
        for (int t = s.arrival_step; t < s.departure_step; ++t)
          demand[t] += kw;
      }
    }
  }
  for (double &d : demand)
    d /= samples;
  return demand;
}

const SimTrace &run_episode(Simulator &sim, Controller &ctl,
                            std::uint64_t seed) {
  sim.reset(seed);
  ctl.reset(sim);
  while (!sim.done()) {
    auto a = ctl.act(sim);
    sim.step(a, ctl.step_flags());
  }
  return sim.trace();
}

SimTrace resimulate(const Replay &replay, Controller &ctl) {
  Simulator sim(replay.config);
  sim.reset(replay);
  ctl.reset(sim);
  while (!sim.done()) {
    auto a = ctl.act(sim);
    sim.step(a, ctl.step_flags());
  }
  return sim.trace();
}

} // namespace v2g
