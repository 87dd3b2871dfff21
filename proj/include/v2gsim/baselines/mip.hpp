// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/baselines/schedule_problem.hpp"

#include <string>
#include <vector>

namespace v2g::baselines {

enum class SolveStatus { Optimal, Feasible, Relaxed, Infeasible };
std::string to_string(SolveStatus s);

struct SolveOptions {
  int max_nodes = 5000;
  double relative_gap = 1e-9;
  double integrality_tol = 1e-6;
  double transformer_penalty = 1e5; // per kW of elastic transformer excess
  double target_penalty = 1e3;      // per kWh of departure shortfall
  int heuristic_every = 25;         // nodes between merge heuristics
};

/// Currents are indexed like ScheduleProblem::sessions, then by step
/// offset from the session's window start.
struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  /// Tracking: sum (P_set - P_tot)^2. Profit: total cash flow in EUR.
  double objective = 0.0;
  double penalty = 0.0;   // elastic terms in the internal objective
  double bound_gap = 0.0; // relative gap at termination
  int nodes = 0;
  double seconds = 0.0;
  std::vector<std::vector<double>> ich;
  std::vector<std::vector<double>> idis;
  std::vector<std::vector<double>> energy; // window start .. end, inclusive
  std::vector<double> shortfall_kwh;
  std::vector<std::vector<double>> transformer_excess_kw; // [w][t]
  std::string report; // violated-constraint summary, empty if none

  /// ω flags of the mixed-integer model.
  bool charging(std::size_t s, int k) const { return ich[s][k] > 0.0; }
  bool discharging(std::size_t s, int k) const { return idis[s][k] < 0.0; }

  /// Net current per slot per step, zero where no EV is connected.
  std::vector<std::vector<double>> slot_currents(const ScheduleProblem &p) const;
  /// Total EV power per step.
  std::vector<double> total_power(const ScheduleProblem &p) const;
};

/// Branch-and-bound over charge/discharge/idle modes with convex QP
/// relaxations. The relaxation splits each current into a charge and a
/// discharge part coupled by I_ch/max_ch + I_dis/max_dis <= 1; branching
/// enforces exclusivity and the minimum-current dead-bands. Transformer
/// limits and departure targets are elastic so every node is feasible.
Solution solve(const ScheduleProblem &p, const SolveOptions &opt = {});

/// Tracking objective on a tracking-kind problem.
Solution solve_pst(ScheduleProblem p, const SolveOptions &opt = {});
/// Profit objective with hard (elastic) departure targets.
Solution solve_profit(ScheduleProblem p, const SolveOptions &opt = {});

} // namespace v2g::baselines
