// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/engine/config.hpp"
#include "v2gsim/ev/ev_model.hpp"
#include "v2gsim/grid/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace v2g {

inline constexpr int kReplayFormatVersion = 1;

/// Realized exogenous inputs. Price, load and PV series extend
/// forecast_horizon steps past the end so look-ahead windows are defined.
struct Exogenous {
  std::vector<double> charge_price;
  std::vector<double> discharge_price;
  std::vector<grid::TransformerSeries> transformers;
  std::vector<double> setpoint;
  bool operator==(const Exogenous &) const = default;
};

/// A session as it arrived: energy equals the arrival energy, histories empty.
struct ScheduledSession {
  int slot = 0;
  ev::EvSession session;
  bool operator==(const ScheduledSession &) const = default;
};

struct Replay {
  int format_version = kReplayFormatVersion;
  SimConfig config;
  std::uint64_t seed = 0;
  std::vector<ScheduledSession> sessions; // in arrival order
  Exogenous series;
  std::vector<int> dropped; // per step

  bool operator==(const Replay &) const = default;
};

nlohmann::json replay_to_json(const Replay &r);
Replay replay_from_json(const nlohmann::json &j);

std::string dump_replay(const Replay &r);
Replay parse_replay(const std::string &text);
void save_replay(const std::filesystem::path &path, const Replay &r);
Replay load_replay(const std::filesystem::path &path);

} // namespace v2g
