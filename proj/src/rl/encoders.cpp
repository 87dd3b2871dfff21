// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/rl/encoders.hpp"

#include "v2gsim/common/series.hpp"
#include "v2gsim/grid/grid.hpp"

namespace v2g::rl {

std::size_t pst_observation_size(int slots) {
  return 3 + 3 * static_cast<std::size_t>(slots);
}

std::vector<double> encode_pst(const Simulator &sim) {
  const int n = sim.slot_count();
  std::vector<double> obs;
  obs.reserve(pst_observation_size(n));
  obs.push_back(sim.t());
  obs.push_back(hold_at(sim.series().setpoint, sim.t()));
  obs.push_back(sim.previous_total_kw());
  for (int k = 0; k < n; ++k) {
    const auto &s = sim.session(k);
    if (!s) {
      obs.insert(obs.end(), {0.0, 0.0, 0.0});
      continue;
    }
    obs.push_back(sim.full_flags()[k]);
    obs.push_back(s->energy_kwh - s->arrival_energy_kwh);
    obs.push_back(sim.t() - s->arrival_step);
  }
  return obs;
}

std::size_t profit_observation_size(int horizon, int transformers, int slots) {
  const auto h = static_cast<std::size_t>(horizon);
  return 2 + h + 2 * h * static_cast<std::size_t>(transformers) +
         2 * static_cast<std::size_t>(slots);
}

std::vector<double> encode_profit(const Simulator &sim) {
  const auto &cfg = sim.config();
  const int h = cfg.forecast_horizon;
  const int t = sim.t();
  std::vector<double> obs;
  obs.reserve(profit_observation_size(h, static_cast<int>(cfg.transformers.size()),
                                      sim.slot_count()));
  obs.push_back(t);
  obs.push_back(sim.previous_total_kw());
  for (int k = 0; k < h; ++k)
    obs.push_back(hold_at(sim.series().charge_price, t + k));
  for (std::size_t w = 0; w < cfg.transformers.size(); ++w) {
    const auto &f = sim.net_forecasts()[w];
    obs.insert(obs.end(), f.begin(), f.end());
    auto dr = grid::visible_dr(sim.series().transformers[w].dr, t, h,
                               cfg.transformers[w].dr_notice_steps);
    obs.insert(obs.end(), dr.begin(), dr.end());
  }
  for (int k = 0; k < sim.slot_count(); ++k) {
    const auto &s = sim.session(k);
    if (!s) {
      obs.insert(obs.end(), {0.0, 0.0});
      continue;
    }
    obs.push_back(s->soc());
    obs.push_back(s->departure_step - t);
  }
  return obs;
}

std::size_t observation_size(const Simulator &sim) {
  const auto &cfg = sim.config();
  return cfg.problem == Problem::Pst
             ? pst_observation_size(sim.slot_count())
             : profit_observation_size(cfg.forecast_horizon,
                                       static_cast<int>(cfg.transformers.size()),
                                       sim.slot_count());
}

std::vector<double> encode(const Simulator &sim) {
  return sim.config().problem == Problem::Pst ? encode_pst(sim)
                                              : encode_profit(sim);
}

} // namespace v2g::rl
