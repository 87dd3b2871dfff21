// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/parallel/batch.hpp"

#include "v2gsim/baselines/heuristics.hpp"
#include "v2gsim/baselines/mpc.hpp"

#include <chrono>
#include <memory>
#include <stdexcept>

namespace v2g::parallel {

namespace {

std::optional<int> mpc_horizon(const std::string &name) {
  if (name == "mpc")
    return 25;
  if (name.rfind("mpc:", 0) != 0)
    return std::nullopt;
  try {
    std::size_t used = 0;
    int h = std::stoi(name.substr(4), &used);
    if (used == name.size() - 4 && h >= 1)
      return h;
  } catch (const std::exception &) {
  }
  return std::nullopt;
}

} // namespace

const std::vector<std::string> &algorithm_names() {
  static const std::vector<std::string> names{"afap", "alap", "rr", "mpc",
                                              "optimal"};
  return names;
}

bool known_algorithm(const std::string &name) {
  return name == "afap" || name == "alap" || name == "rr" ||
         name == "optimal" || mpc_horizon(name).has_value();
}

namespace {

std::unique_ptr<Controller> make_controller(const std::string &name) {
  if (auto h = mpc_horizon(name))
    return std::make_unique<baselines::Mpc>(*h);
  return baselines::make_heuristic(name);
}

} // namespace

SimTrace run_on_replay(const Replay &replay, const std::string &algorithm) {
  if (algorithm == "optimal")
    return baselines::run_optimal(replay).trace;
  auto ctl = make_controller(algorithm);
  return resimulate(replay, *ctl);
}

RunResult run_algorithm(const SimConfig &config, const std::string &algorithm,
                        std::uint64_t seed, bool keep_trace, bool keep_replay) {
  RunResult out;
  out.row.seed = seed;
  out.row.algorithm = algorithm;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Simulator sim(config);
    SimTrace trace;
    if (algorithm == "optimal") {
      // The schedule does not depend on the actions taken.
      baselines::Afap probe;
      run_episode(sim, probe, seed);
      trace = run_on_replay(sim.replay(), algorithm);
    } else {
      auto ctl = make_controller(algorithm);
      trace = run_episode(sim, *ctl, seed);
    }
    out.row.metrics = metrics::compute_metrics(trace);
    if (keep_trace)
      out.trace = std::move(trace);
    if (keep_replay)
      out.replay = sim.replay();
  } catch (const std::exception &e) {
    out.row.error = e.what();
  }
  out.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

std::vector<RunResult> run_batch_serial(const BatchSpec &spec) {
  std::vector<RunResult> out;
  for (int k = 0; k < spec.runs; ++k)
    for (const auto &alg : spec.algorithms)
      out.push_back(run_algorithm(spec.config, alg, spec.seed_base + k,
                                  spec.keep_traces, spec.keep_replays));
  return out;
}

std::vector<RunResult> run_batch(const BatchSpec &spec) {
  const int na = static_cast<int>(spec.algorithms.size());
  const int jobs = spec.runs * na;
  std::vector<RunResult> out(jobs);
#pragma omp parallel for schedule(dynamic, 1)
  for (int j = 0; j < jobs; ++j)
    out[j] = run_algorithm(spec.config, spec.algorithms[j % na],
                           spec.seed_base + j / na, spec.keep_traces,
                           spec.keep_replays);
  return out;
}

} // namespace v2g::parallel
