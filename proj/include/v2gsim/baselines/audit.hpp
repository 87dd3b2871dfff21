// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/baselines/mip.hpp"

#include <string>
#include <vector>

namespace v2g::baselines {

struct Violation {
  std::string constraint;
  int session = -1; // index into problem.sessions, -1 if not session-bound
  int step = -1;
  double residual = 0.0;
};

struct AuditReport {
  double max_residual = 0.0;
  /// Departure shortfall, kept apart from the hard constraints because a
  /// relaxed solution reports it on purpose.
  double max_target_shortfall = 0.0;
  std::vector<Violation> violations; // residuals above the tolerance

  bool ok(double tol = 1e-6) const { return max_residual <= tol; }
};

/// Re-derives every constraint of the scheduling model from the raw
/// currents: boxes and dead-bands, exclusivity, battery dynamics by forward
/// integration, capacity bounds, station and transformer limits, and
/// departure targets.
AuditReport audit(const ScheduleProblem &p, const Solution &s,
                  double tol = 1e-6);

} // namespace v2g::baselines
