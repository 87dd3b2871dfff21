// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/engine/simulator.hpp"
#include "v2gsim/metrics/metrics.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace v2g::rl {

struct Box {
  std::size_t size = 0;
  double low = 0.0;
  double high = 0.0;
};

struct EnvStep {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  std::map<std::string, double> stats;
};

/// Gym-style wrapper: spaces are known at construction, before reset.
class Env {
public:
  explicit Env(SimConfig config);

  Box observation_space() const;
  Box action_space() const;

  std::vector<double> reset(std::uint64_t seed);
  EnvStep step(std::span<const double> action);

  std::vector<double> observe() const;
  bool done() const { return sim_.done(); }
  const Simulator &simulator() const { return sim_; }
  metrics::Metrics metrics() const;
  Replay replay() const { return sim_.replay(); }

private:
  Simulator sim_;
  bool started_ = false;
};

} // namespace v2g::rl
