// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/behavior/behavior.hpp"
#include "v2gsim/common/calendar.hpp"
#include "v2gsim/ev/ev_model.hpp"
#include "v2gsim/ev/registry.hpp"
#include "v2gsim/grid/grid.hpp"
#include "v2gsim/station/station.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace v2g {

enum class Problem { Pst, Profit };

std::string to_string(Problem p);
Problem problem_from_string(const std::string &s);

struct SimConfig {
  // simulation
  int timescale_minutes = 15;
  int sim_length = 85;
  CalendarTime start;
  behavior::Scenario scenario = behavior::Scenario::Public;
  Problem problem = Problem::Pst;
  std::uint64_t seed = 0;
  bool v2g_enabled = false;
  double forecast_sigma = 0.0;
  int forecast_horizon = 25;
  std::string price_source = "builtin";
  double discharge_price_factor = 1.0;
  double setpoint_multiplier = 1.2;
  int setpoint_samples = 20;
  std::string behavior_dir;

  // ev
  std::string ev_spec_source = "registry"; // registry | custom
  std::string registry_csv;
  std::vector<ev::EvSpec> custom_specs;
  ev::SpecDefaults spec_defaults;
  double desired_soc = 1.0;
  double battery_age_days = 730.0;
  ev::DegradationParams degradation;

  std::vector<station::ChargerSpec> chargers;
  std::vector<grid::TransformerSpec> transformers;

  double dt_hours() const { return timescale_minutes / 60.0; }
  int total_evse() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const SimConfig &) const = default;
};

/// `count` identical chargers assigned round-robin over the transformers.
std::vector<station::ChargerSpec>
uniform_chargers(int count, const station::ChargerSpec &proto,
                 int transformer_count);

SimConfig load_config(const std::filesystem::path &path);
SimConfig parse_config_yaml(const std::string &text);

nlohmann::json config_to_json(const SimConfig &cfg);
/// Unknown keys are rejected; missing keys keep their defaults. The result
/// is validated.
SimConfig config_from_json(const nlohmann::json &j);

/// Human-editable YAML with every field spelled out.
std::string config_to_yaml(const SimConfig &cfg);

nlohmann::json spec_to_json(const ev::EvSpec &s);
/// Reads a fully specified EV spec (as written by spec_to_json).
ev::EvSpec spec_from_json(const nlohmann::json &j, const std::string &path);

/// A runnable configuration: 10 single-EVSE AC chargers on one transformer.
SimConfig default_config();

/// EV specs to sample from, resolved from the registry source.
std::vector<ev::EvSpec> resolve_registry(const SimConfig &cfg);
behavior::BehaviorModel resolve_behavior(const SimConfig &cfg);

} // namespace v2g
