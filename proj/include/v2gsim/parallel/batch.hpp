// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/engine/simulator.hpp"
#include "v2gsim/metrics/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace v2g::parallel {

/// afap, alap, rr, mpc (or mpc:<h>), optimal.
bool known_algorithm(const std::string &name);
const std::vector<std::string> &algorithm_names();

struct RunResult {
  metrics::RunRow row;
  double seconds = 0.0;
  std::optional<SimTrace> trace;
  std::optional<Replay> replay;
};

/// One episode. Failures are caught and reported in row.error.
RunResult run_algorithm(const SimConfig &config, const std::string &algorithm,
                        std::uint64_t seed, bool keep_trace = false,
                        bool keep_replay = false);

/// Re-simulates a recorded episode under `algorithm`; the EV schedule and
/// exogenous series are those of the replay.
SimTrace run_on_replay(const Replay &replay, const std::string &algorithm);

struct BatchSpec {
  SimConfig config;
  std::vector<std::string> algorithms;
  int runs = 1;
  std::uint64_t seed_base = 0; // run k uses seed_base + k for every algorithm
  bool keep_traces = false;
  bool keep_replays = false;
};

/// Results ordered by run, then by algorithm, whatever the thread count.
std::vector<RunResult> run_batch(const BatchSpec &spec);
std::vector<RunResult> run_batch_serial(const BatchSpec &spec);

} // namespace v2g::parallel
