// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/baselines/mpc.hpp"

#include "v2gsim/baselines/heuristics.hpp"
#include "v2gsim/common/errors.hpp"

#include <algorithm>

namespace v2g::baselines {

Mpc::Mpc(int horizon, SolveOptions options)
    : horizon_(horizon), options_(options) {
  if (horizon_ < 1)
    throw std::invalid_argument("mpc horizon must be at least 1");
}

std::string Mpc::name() const {
  return horizon_ == 25 ? "mpc" : "mpc:" + std::to_string(horizon_);
}

void Mpc::reset(const Simulator &sim) {
  if (sim.config().problem != Problem::Profit)
    throw CapabilityError("mpc needs prices and departure times; it runs in "
                          "the profit scenario only");
  flags_ = 0;
  fallbacks_ = 0;
  nodes_ = 0;
  seconds_ = 0.0;
}

std::vector<double> Mpc::act(const Simulator &sim) {
  flags_ = 0;
  const int h = std::min(horizon_, sim.config().forecast_horizon);
  auto problem = problem_from_state(sim, h);
  std::vector<double> a(sim.slot_count(), 0.0);
  if (problem.sessions.empty())
    return a;
  try {
    auto sol = solve_profit(problem, options_);
    nodes_ += sol.nodes;
    seconds_ += sol.seconds;
    if (sol.status != SolveStatus::Infeasible) {
      for (std::size_t s = 0; s < problem.sessions.size(); ++s) {
        const auto &w = problem.sessions[s];
        if (w.end <= 0)
          continue;
        const double amps = sol.ich[s][0] + sol.idis[s][0];
        a[w.slot] = station::encode_current(amps, sim.charger_of(w.slot));
      }
      return a;
    }
  } catch (const SolverError &) {
  }
  ++fallbacks_;
  flags_ = kFallback;
  return Afap().act(sim);
}

OptimalRun run_optimal(const Replay &replay, const SolveOptions &options,
                       bool enforce_targets) {
  OptimalRun out;
  out.problem = problem_from_replay(replay, replay.config.problem);
  out.problem.enforce_targets = enforce_targets;
  out.solution = solve(out.problem, options);
  PlanController ctl(out.solution.slot_currents(out.problem), "optimal");
  out.trace = resimulate(replay, ctl);
  return out;
}

} // namespace v2g::baselines
