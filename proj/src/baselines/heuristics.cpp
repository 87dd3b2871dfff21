// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/baselines/heuristics.hpp"

#include "v2gsim/common/errors.hpp"
#include "v2gsim/common/series.hpp"

#include <stdexcept>

namespace v2g::baselines {

std::vector<double> Afap::act(const Simulator &sim) {
  std::vector<double> a(sim.slot_count(), 0.0);
  for (int k = 0; k < sim.slot_count(); ++k) {
    const auto &s = sim.session(k);
    if (s && s->energy_kwh < s->target_energy_kwh)
      a[k] = 1.0;
  }
  return a;
}

void Alap::reset(const Simulator &sim) {
  if (sim.config().problem == Problem::Pst)
    throw CapabilityError(
        "alap needs departure times, which the tracking scenario hides");
}

std::vector<double> Alap::act(const Simulator &sim) {
  std::vector<double> a(sim.slot_count(), 0.0);
  const double dt = sim.config().dt_hours();
  for (int k = 0; k < sim.slot_count(); ++k) {
    const auto &s = sim.session(k);
    if (!s)
      continue;
    const double need = s->target_energy_kwh - s->energy_kwh;
    if (need <= 0.0)
      continue;
    const double pmax = behavior::max_session_power(s->spec, sim.charger_of(k));
    const int remaining = s->departure_step - sim.t();
    if (need > (remaining - 1) * pmax * dt + 1e-9)
      a[k] = 1.0;
  }
  return a;
}

std::vector<double> RoundRobin::act(const Simulator &sim) {
  const int n = sim.slot_count();
  std::vector<double> a(n, 0.0);
  if (n == 0)
    return a;
  const double dt = sim.config().dt_hours();
  const double budget = hold_at(sim.series().setpoint, sim.t());
  double used = 0.0;
  int first_denied = -1;
  for (int i = 0; i < n; ++i) {
    const int k = (pointer_ + i) % n;
    const auto &s = sim.session(k);
    if (!s || s->energy_kwh >= s->target_energy_kwh)
      continue;
    const double kw =
        std::min(behavior::max_session_power(s->spec, sim.charger_of(k)),
                 (s->spec.max_capacity_kwh - s->energy_kwh) / dt);
    if (used + kw > budget + 1e-9) {
      first_denied = k;
      break;
    }
    used += kw;
    a[k] = 1.0;
  }
  pointer_ = first_denied >= 0 ? first_denied : (pointer_ + 1) % n;
  return a;
}

std::vector<double> PlanController::act(const Simulator &sim) {
  std::vector<double> a(sim.slot_count(), 0.0);
  const int t = sim.t();
  for (int k = 0; k < sim.slot_count(); ++k) {
    if (!sim.session(k) || k >= static_cast<int>(amps_.size()) ||
        t >= static_cast<int>(amps_[k].size()))
      continue;
    a[k] = station::encode_current(amps_[k][t], sim.charger_of(k));
  }
  return a;
}

std::unique_ptr<Controller> make_heuristic(const std::string &name) {
  if (name == "afap")
    return std::make_unique<Afap>();
  if (name == "alap")
    return std::make_unique<Alap>();
  if (name == "rr")
    return std::make_unique<RoundRobin>();
  throw std::invalid_argument("unknown heuristic '" + name + "'");
}

} // namespace v2g::baselines
