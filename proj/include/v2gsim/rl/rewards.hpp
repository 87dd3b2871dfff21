// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/engine/trace.hpp"

namespace v2g::rl {

inline constexpr double kOverloadPenalty = 100.0;
inline constexpr double kSatisfactionPenalty = 100.0;
inline constexpr double kSatisfactionSharpness = 10.0;

/// -(P_set - P_tot)^2 for the step just executed.
double reward_pst(const StepRecord &r);

/// Cash flow minus 100 per kWh of overload minus
/// 100 * exp(-10 * satisfaction) summed over the EVs that left.
double reward_profit(const StepRecord &r, double dt_hours);

} // namespace v2g::rl
