// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/baselines/brute_force.hpp"

#include "v2gsim/baselines/heuristics.hpp"
#include "v2gsim/engine/simulator.hpp"
#include "v2gsim/metrics/metrics.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include <omp.h>

namespace v2g::baselines {

namespace {

struct Pair {
  int slot;
  int step;
};

std::vector<Pair> connected_pairs(const Replay &r) {
  std::vector<Pair> out;
  const int T = r.config.sim_length;
  for (const auto &s : r.sessions)
    for (int t = s.session.arrival_step;
         t < std::min(s.session.departure_step, T); ++t)
      out.push_back({s.slot, t});
  return out;
}

std::vector<std::vector<double>> decode_plan(const Replay &r,
                                             const std::vector<Pair> &pairs,
                                             std::span<const double> levels,
                                             std::int64_t index) {
  std::vector<std::vector<double>> amps(
      r.config.total_evse(), std::vector<double>(r.config.sim_length, 0.0));
  const auto L = static_cast<std::int64_t>(levels.size());
  for (const auto &p : pairs) {
    amps[p.slot][p.step] = levels[static_cast<std::size_t>(index % L)];
    index /= L;
  }
  return amps;
}

double evaluate(Simulator &sim, const Replay &r, PlanController &ctl) {
  sim.reset(r);
  ctl.reset(sim);
  while (!sim.done())
    sim.step(ctl.act(sim));
  const auto m = metrics::compute_metrics(sim.trace());
  if (r.config.problem == Problem::Pst)
    return m.tracking_sq.value_or(0.0);
  if (m.overload_kwh > 0.0)
    return std::numeric_limits<double>::infinity();
  for (const auto &d : sim.trace().departures())
    if (d.energy_kwh < d.target_energy_kwh - 1e-9)
      return std::numeric_limits<double>::infinity();
  return -m.profits_eur;
}

struct Best {
  double cost = std::numeric_limits<double>::infinity();
  std::int64_t index = -1;
  bool better_than(const Best &o) const {
    if (index < 0)
      return false;
    if (o.index < 0)
      return true;
    return cost < o.cost || (cost == o.cost && index < o.index);
  }
};

OracleResult finish(const Replay &r, const std::vector<Pair> &pairs,
                    std::span<const double> levels, std::int64_t plans,
                    const Best &best, std::vector<double> costs) {
  OracleResult out;
  out.plans = plans;
  out.found = best.index >= 0 && std::isfinite(best.cost);
  out.best_index = best.index;
  const bool pst = r.config.problem == Problem::Pst;
  out.objective = pst ? best.cost : -best.cost;
  if (best.index >= 0)
    out.amps = decode_plan(r, pairs, levels, best.index);
  if (!pst)
    for (double &c : costs)
      c = -c;
  out.all_objectives = std::move(costs);
  return out;
}

std::int64_t checked_count(const Replay &r, std::size_t levels) {
  auto n = oracle_plan_count(r, levels);
  if (n < 0)
    throw std::length_error("brute force oracle: more than " +
                            std::to_string(kMaxOraclePlans) + " plans");
  return n;
}

} // namespace

std::int64_t oracle_plan_count(const Replay &replay, std::size_t levels) {
  const auto pairs = connected_pairs(replay);
  std::int64_t n = 1;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    n *= static_cast<std::int64_t>(levels);
    if (n > kMaxOraclePlans)
      return -1;
  }
  return n;
}

OracleResult brute_force_oracle_serial(const Replay &replay,
                                       std::span<const double> levels,
                                       bool keep_all) {
  const auto pairs = connected_pairs(replay);
  const std::int64_t plans = checked_count(replay, levels.size());
  std::vector<double> costs(keep_all ? plans : 0);
  Simulator sim(replay.config);
  Best best;
  for (std::int64_t i = 0; i < plans; ++i) {
    PlanController ctl(decode_plan(replay, pairs, levels, i), "plan");
    Best b{evaluate(sim, replay, ctl), i};
    if (keep_all)
      costs[i] = b.cost;
    if (b.better_than(best))
      best = b;
  }
  return finish(replay, pairs, levels, plans, best, std::move(costs));
}

OracleResult brute_force_oracle(const Replay &replay,
                                std::span<const double> levels,
                                bool keep_all) {
  const auto pairs = connected_pairs(replay);
  const std::int64_t plans = checked_count(replay, levels.size());
  std::vector<double> costs(keep_all ? plans : 0);
  Best best;
  std::string error;
#pragma omp parallel
  {
    Best local;
    std::optional<Simulator> sim;
    try {
      sim.emplace(replay.config);
    } catch (const std::exception &e) {
#pragma omp critical(v2g_oracle_error)
      error = e.what();
    }
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < plans; ++i) {
      if (!sim)
        continue;
      try {
        PlanController ctl(decode_plan(replay, pairs, levels, i), "plan");
        Best b{evaluate(*sim, replay, ctl), i};
        if (keep_all)
          costs[i] = b.cost;
        if (b.better_than(local))
          local = b;
      } catch (const std::exception &e) {
#pragma omp critical(v2g_oracle_error)
        error = e.what();
      }
    }
#pragma omp critical(v2g_oracle_best)
    if (local.better_than(best))
      best = local;
  }
  if (!error.empty())
    throw std::runtime_error("brute force oracle: " + error);
  return finish(replay, pairs, levels, plans, best, std::move(costs));
}

} // namespace v2g::baselines
