// SPDX-License-Identifier: Apache-2.0
// Randomized end-to-end checks used by both the unit tests (small sizes)
// and the acceptance binary (full sizes).
#pragma once

#include "v2gsim/behavior/behavior.hpp"
#include "v2gsim/engine/trace.hpp"

#include <cstdint>
#include <string>

namespace v2g::testing {

bool same_trace(const SimTrace &a, const SimTrace &b);

/// Three steps, two EVSEs, two departures at the last step.
SimTrace hand_built_trace();
/// Largest deviation of the eight headline metrics of hand_built_trace()
/// from values computed outside this code base.
double hand_built_error();

struct BehaviorStats {
  double stay_p = 0.0; // pooled chi-square p-value over all hour rows
  double soc_p = 0.0;
  long long sessions = 0;
  long long night_arrivals = 0; // arrivals with hour in [19, 24) or [0, 5)
  long long simulated_arrivals = 0;
};

/// `n` sessions drawn hour by hour from the model, binned back onto the
/// table edges. The night count comes from the arrival process itself,
/// sampled over `weeks` weeks at 15-minute steps.
BehaviorStats behavior_stats(behavior::Scenario s, long long n, int weeks,
                             std::uint64_t seed);

/// Largest |observed - expected| / sigma over the registry when drawing
/// `n` specs by sales weight.
double spec_frequency_z(long long n, std::uint64_t seed);

struct OracleStats {
  int instances = 0;
  int failures = 0;
  double worst_margin = 0.0; // largest violation of the checked inequality
  double max_audit = 0.0;
  double seconds = 0.0;
  std::string detail;
};

/// One EVSE, four connected steps, levels {0, 8, 16, 24, 32} A. Checks that
/// the solver is no worse than any plan and that the best plan is within
/// the grid-resolution bound of the solver. The first comparison allows a
/// relative 1e-9, the interior-point stopping tolerance.
OracleStats pst_oracle(int instances, std::uint64_t seed);

/// V2G EV over four steps with a two-step price valley and levels
/// {-32, -16, 0, 16, 32} A; targets lie on the level grid.
OracleStats profit_oracle(int instances, std::uint64_t seed);

} // namespace v2g::testing
