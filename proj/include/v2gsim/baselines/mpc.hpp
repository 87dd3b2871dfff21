// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/baselines/mip.hpp"
#include "v2gsim/engine/simulator.hpp"

#include <string>

namespace v2g::baselines {

/// Receding-horizon profit maximization over the connected EVs, using the
/// simulator's forecasts. The horizon is capped at the forecast horizon.
/// Falls back to full-power charging for a step whose subproblem is
/// infeasible or fails, and flags that step.
class Mpc final : public Controller {
public:
  explicit Mpc(int horizon = 25, SolveOptions options = {});
  std::string name() const override;
  void reset(const Simulator &sim) override;
  std::vector<double> act(const Simulator &sim) override;
  std::uint8_t step_flags() const override { return flags_; }

  int fallbacks() const { return fallbacks_; }
  double solve_seconds() const { return seconds_; }
  int nodes() const { return nodes_; }

private:
  int horizon_;
  SolveOptions options_;
  std::uint8_t flags_ = 0;
  int fallbacks_ = 0;
  int nodes_ = 0;
  double seconds_ = 0.0;
};

struct OptimalRun {
  ScheduleProblem problem;
  Solution solution;
  SimTrace trace; // the solution played back through the simulator
};

/// Clairvoyant optimum of the replay's scenario (tracking or profit),
/// replayed through the engine. In tracking mode departure targets are
/// enforced as elastic constraints unless `enforce_targets` is false.
OptimalRun run_optimal(const Replay &replay, const SolveOptions &options = {},
                       bool enforce_targets = true);

} // namespace v2g::baselines
