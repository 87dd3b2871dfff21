// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/engine/simulator.hpp"

#include <memory>
#include <string>
#include <vector>

namespace v2g::baselines {

/// Full charging current for every EV below its target.
class Afap final : public Controller {
public:
  std::string name() const override { return "afap"; }
  std::vector<double> act(const Simulator &sim) override;
};

/// Idles until the remaining steps at full power barely cover the energy
/// still needed. Needs departure times, so it refuses tracking scenarios.
class Alap final : public Controller {
public:
  std::string name() const override { return "alap"; }
  void reset(const Simulator &sim) override;
  std::vector<double> act(const Simulator &sim) override;
};

/// Grants full current to EVSEs in turn, starting from a pointer that
/// persists across steps, while the estimated total stays within P_set.
class RoundRobin final : public Controller {
public:
  std::string name() const override { return "rr"; }
  void reset(const Simulator &) override { pointer_ = 0; }
  std::vector<double> act(const Simulator &sim) override;
  int pointer() const { return pointer_; }

private:
  int pointer_ = 0;
};

/// Plays back a current schedule [slot][step] through the action encoding.
class PlanController final : public Controller {
public:
  PlanController(std::vector<std::vector<double>> amps, std::string name)
      : amps_(std::move(amps)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  std::vector<double> act(const Simulator &sim) override;

private:
  std::vector<std::vector<double>> amps_;
  std::string name_;
};

/// "afap", "alap" or "rr".
std::unique_ptr<Controller> make_heuristic(const std::string &name);

} // namespace v2g::baselines
