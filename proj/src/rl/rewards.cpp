// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/rl/rewards.hpp"

#include <cmath>

namespace v2g::rl {

double reward_pst(const StepRecord &r) {
  double e = r.setpoint_kw - r.total_ev_kw;
  return -e * e;
}

double reward_profit(const StepRecord &r, double dt_hours) {
  double overload_kwh = 0.0;
  for (double kw : r.overload_kw)
    overload_kwh += kw * dt_hours;
  double penalty = 0.0;
  for (const auto &d : r.departures)
    penalty += std::exp(-kSatisfactionSharpness * d.satisfaction());
  return r.cashflow - kOverloadPenalty * overload_kwh -
         kSatisfactionPenalty * penalty;
}

} // namespace v2g::rl
