// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/rl/env.hpp"

#include "v2gsim/common/errors.hpp"
#include "v2gsim/rl/encoders.hpp"

#include <limits>

namespace v2g::rl {

Env::Env(SimConfig config) : sim_(std::move(config)) {}

Box Env::observation_space() const {
  const double inf = std::numeric_limits<double>::infinity();
  return {observation_size(sim_), -inf, inf};
}

Box Env::action_space() const {
  const double low =
      sim_.action_range() == station::ActionRange::Unipolar ? 0.0 : -1.0;
  return {static_cast<std::size_t>(sim_.slot_count()), low, 1.0};
}

std::vector<double> Env::reset(std::uint64_t seed) {
  sim_.reset(seed);
  started_ = true;
  return observe();
}

std::vector<double> Env::observe() const { return encode(sim_); }

EnvStep Env::step(std::span<const double> action) {
  if (!started_)
    throw SimulationError("step called before reset");
  const auto &r = sim_.step(action);
  EnvStep out;
  out.observation = observe();
  out.reward = r.reward;
  out.done = sim_.done();
  double overload = 0.0;
  for (double o : r.overload_kw)
    overload += o * sim_.config().dt_hours();
  out.stats = {{"t", static_cast<double>(r.t)},
               {"total_ev_kw", r.total_ev_kw},
               {"setpoint_kw", r.setpoint_kw},
               {"cashflow_eur", r.cashflow},
               {"overload_kwh", overload},
               {"departures", static_cast<double>(r.departures.size())},
               {"dropped_arrivals", static_cast<double>(r.dropped_arrivals)}};
  return out;
}

metrics::Metrics Env::metrics() const {
  return metrics::compute_metrics(sim_.trace());
}

} // namespace v2g::rl
