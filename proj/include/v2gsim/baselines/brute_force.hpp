// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/engine/replay.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace v2g::baselines {

inline constexpr std::int64_t kMaxOraclePlans = 1'000'000;

struct OracleResult {
  /// Tracking: sum (P_set - P_tot)^2. Profit: cash flow in EUR, over plans
  /// that meet every departure target without overload.
  double objective = 0.0;
  bool found = false;
  std::int64_t plans = 0;
  std::int64_t best_index = -1;
  std::vector<std::vector<double>> amps; // [slot][step]
  std::vector<double> all_objectives;    // per plan, if requested
};

/// Number of discretized plans: levels ^ connected (slot, step) pairs.
/// Returns -1 past kMaxOraclePlans.
std::int64_t oracle_plan_count(const Replay &replay, std::size_t levels);

/// Runs every plan through the simulator under `replay`. Ties keep the
/// lowest plan index. Throws std::length_error past kMaxOraclePlans.
OracleResult brute_force_oracle(const Replay &replay,
                                std::span<const double> levels,
                                bool keep_all = false);

/// Single-threaded reference with identical results.
OracleResult brute_force_oracle_serial(const Replay &replay,
                                       std::span<const double> levels,
                                       bool keep_all = false);

} // namespace v2g::baselines
