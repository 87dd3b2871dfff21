// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/behavior/behavior.hpp"
#include "v2gsim/common/rng.hpp"
#include "v2gsim/engine/config.hpp"
#include "v2gsim/engine/replay.hpp"
#include "v2gsim/engine/trace.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace v2g {

class Simulator;

/// A policy mapping the observable simulator state to one normalized action
/// per EVSE slot.
class Controller {
public:
  virtual ~Controller() = default;
  virtual std::string name() const = 0;
  virtual void reset(const Simulator &) {}
  virtual std::vector<double> act(const Simulator &sim) = 0;
  /// Flags (see TraceFlag) to record for the step about to be taken.
  virtual std::uint8_t step_flags() const { return 0; }
};

/// Discrete-time charging simulation. Each step decodes actions, applies
/// station limits, advances the batteries, aggregates transformer power,
/// processes departures, samples the next step's arrivals and records the
/// outcome.
class Simulator {
public:
  explicit Simulator(SimConfig config);

  /// Fresh episode: every random draw derives from `seed`.
  void reset(std::uint64_t seed);
  /// Re-runs the realized schedule and series of `replay`.
  void reset(const Replay &replay);

  const StepRecord &step(std::span<const double> actions,
                         std::uint8_t controller_flags = 0);

  bool done() const { return t_ >= config_.sim_length; }
  int t() const { return t_; }
  std::uint64_t seed() const { return rng_.seed(); }
  const SimConfig &config() const { return config_; }
  const std::vector<ev::EvSpec> &registry() const { return registry_; }
  const behavior::BehaviorModel &behavior() const { return behavior_; }
  station::ActionRange action_range() const;

  int slot_count() const { return static_cast<int>(slots_.size()); }
  int charger_index(int slot) const { return slot_charger_[slot]; }
  const station::ChargerSpec &charger_of(int slot) const {
    return config_.chargers[slot_charger_[slot]];
  }
  const std::optional<ev::EvSession> &session(int slot) const {
    return slots_[slot];
  }
  /// First slot index of each charger, plus a final end marker.
  const std::vector<int> &charger_offsets() const { return offsets_; }

  const Exogenous &series() const { return series_; }
  /// Noisy forecasts of load + PV per transformer for steps [t, t + H),
  /// redrawn every step.
  const std::vector<std::vector<double>> &net_forecasts() const {
    return forecasts_;
  }
  /// Fully-charged indicator per slot: 1 once a charging request met zero
  /// measured energy, 0.5 while connected otherwise, 0 when empty.
  const std::vector<double> &full_flags() const { return full_; }
  double previous_total_kw() const;

  const SimTrace &trace() const { return trace_; }
  const std::vector<ev::EvSession> &departed() const { return departed_; }

  /// Realized schedule and series of the current episode.
  Replay replay() const;

private:
  void build_series();
  void draw_forecasts();
  void place_arrivals(int step);

  SimConfig config_;
  std::vector<ev::EvSpec> registry_;
  behavior::BehaviorModel behavior_;
  behavior::TargetRule target_rule_;
  std::vector<int> slot_charger_;
  std::vector<int> offsets_;

  RngStreams rng_;
  bool replaying_ = false;
  std::vector<ScheduledSession> schedule_; // realized or replayed
  std::size_t schedule_cursor_ = 0;
  std::vector<int> dropped_;
  int next_id_ = 0;

  int t_ = 0;
  std::vector<std::optional<ev::EvSession>> slots_;
  std::vector<double> full_;
  Exogenous series_;
  std::vector<std::vector<double>> forecasts_;
  SimTrace trace_;
  std::vector<ev::EvSession> departed_;
};

/// Mean power demand per step (kW) over `samples` dry samplings of the
/// arrival process, each session's energy need spread evenly over its stay.
std::vector<double> expected_demand_kw(const SimConfig &cfg,
                                       const behavior::BehaviorModel &model,
                                       const std::vector<ev::EvSpec> &registry,
                                       int samples, std::mt19937_64 &rng);

/// Runs a full episode from reset(seed).
const SimTrace &run_episode(Simulator &sim, Controller &ctl, std::uint64_t seed);

/// Re-simulates `replay` under `ctl`.
SimTrace resimulate(const Replay &replay, Controller &ctl);

} // namespace v2g
