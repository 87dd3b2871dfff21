// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "checks.hpp"
#include "support.hpp"

#include "v2gsim/baselines/audit.hpp"
#include "v2gsim/baselines/brute_force.hpp"
#include "v2gsim/baselines/heuristics.hpp"
#include "v2gsim/baselines/mip.hpp"
#include "v2gsim/baselines/mpc.hpp"
#include "v2gsim/common/errors.hpp"
#include "v2gsim/metrics/metrics.hpp"
#include "v2gsim/parallel/batch.hpp"

#include <cmath>
#include <cstring>

using namespace v2g;
using namespace v2g::baselines;

TEST_SUITE("baselines") {

TEST_CASE("tracking with no EVs costs the setpoint energy") {
  SimConfig cfg = testing::single_evse_config(Problem::Pst, 4);
  Replay r = testing::make_replay(cfg, {}, {3.0, 1.0, 0.0, 2.0});
  auto p = problem_from_replay(r, Problem::Pst);
  auto s = solve_pst(p);
  CHECK(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(14.0));
}

TEST_CASE("reachable setpoint is tracked exactly") {
  SimConfig cfg = testing::single_evse_config(Problem::Pst, 4);
  const double kw = 16.0 * cfg.chargers[0].kw_per_amp();
  auto ev = testing::linear_spec(60.0, false);
  Replay r = testing::make_replay(cfg, {testing::session_at(0, ev, 1, 4, 20.0, 20.0)},
                                  {0.0, kw, 0.5 * kw, kw});
  auto p = problem_from_replay(r, Problem::Pst);
  auto s = solve_pst(p);
  CHECK(s.objective == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(audit(p, s).ok());
  auto amps = s.slot_currents(p);
  CHECK(amps[0][1] == doctest::Approx(16.0).epsilon(1e-6));
  CHECK(amps[0][2] == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("departure targets are honoured when enforced") {
  SimConfig cfg = testing::single_evse_config(Problem::Pst, 5);
  auto ev = testing::linear_spec(60.0, false);
  Replay r = testing::make_replay(cfg, {testing::session_at(0, ev, 1, 5, 20.0, 30.0)},
                                  {0.0, 0.0, 0.0, 0.0, 0.0});
  auto p = problem_from_replay(r, Problem::Pst);
  CHECK(solve_pst(p).objective == doctest::Approx(0.0).epsilon(1e-9));
  p.enforce_targets = true;
  auto s = solve_pst(p);
  CHECK(s.energy[0].back() >= 30.0 - 1e-6);
  // spreading 10 kWh evenly over 4 steps is optimal: 10 kW each
  CHECK(s.objective == doctest::Approx(400.0).epsilon(1e-6));
  CHECK(audit(p, s).ok());
}

TEST_CASE("plan enumeration size") {
  SimConfig cfg = testing::single_evse_config(Problem::Pst, 3);
  auto ev = testing::linear_spec(60.0, false);
  Replay r = testing::make_replay(cfg, {testing::session_at(0, ev, 1, 3, 20.0, 20.0)},
                                  {5.0, 5.0, 5.0});
  std::vector<double> levels{0.0, 32.0};
  CHECK(oracle_plan_count(r, 2) == 4);
  auto o = brute_force_oracle(r, levels, true);
  CHECK(o.plans == 4);
  CHECK(o.all_objectives.size() == 4);
  CHECK(o.found);
  // index 0 is the all-idle plan: three steps of setpoint error
  CHECK(o.all_objectives[0] == doctest::Approx(75.0));
}

TEST_CASE("plan limit") {
  SimConfig cfg = testing::single_evse_config(Problem::Pst, 12);
  auto ev = testing::linear_spec(60.0, false);
  Replay r = testing::make_replay(cfg, {testing::session_at(0, ev, 1, 12, 20.0, 20.0)});
  std::vector<double> levels{0.0, 8.0, 16.0, 24.0, 32.0};
  CHECK(oracle_plan_count(r, levels.size()) == -1);
  CHECK_THROWS_AS(brute_force_oracle(r, levels), std::length_error);
}

TEST_CASE("parallel and serial oracles agree") {
  SimConfig cfg = testing::single_evse_config(Problem::Profit, 5, true);
  auto ev = testing::linear_spec(60.0, true);
  Replay r = testing::make_replay(cfg, {testing::session_at(0, ev, 1, 5, 30.0, 34.0)},
                                  {}, {0.3, 0.1, 0.12, 0.35, 0.3});
  std::vector<double> levels{-32.0, -16.0, 0.0, 16.0, 32.0};
  auto a = brute_force_oracle(r, levels, true);
  auto b = brute_force_oracle_serial(r, levels, true);
  CHECK(a.best_index == b.best_index);
  CHECK(a.objective == b.objective);
  CHECK(a.amps == b.amps);
  REQUIRE(a.all_objectives.size() == b.all_objectives.size());
  CHECK(std::memcmp(a.all_objectives.data(), b.all_objectives.data(),
                    a.all_objectives.size() * sizeof(double)) == 0);
}

TEST_CASE("solver against enumeration") {
  auto pst = testing::pst_oracle(4, 101);
  CHECK(pst.failures == 0);
  CHECK(pst.max_audit <= 1e-6);
  auto profit = testing::profit_oracle(4, 202);
  CHECK(profit.failures == 0);
  CHECK(profit.max_audit <= 1e-6);
  INFO(pst.detail << profit.detail);
}

TEST_CASE("audit flags tampered schedules") {
  SimConfig cfg = testing::single_evse_config(Problem::Pst, 4);
  auto ev = testing::linear_spec(60.0, false);
  Replay r = testing::make_replay(cfg, {testing::session_at(0, ev, 1, 4, 20.0, 20.0)},
                                  {0.0, 30.0, 30.0, 30.0});
  auto p = problem_from_replay(r, Problem::Pst);
  auto s = solve_pst(p);
  REQUIRE(audit(p, s).ok());

  auto bad = s;
  bad.ich[0][0] = 40.0; // above the charger rating
  auto rep = audit(p, bad);
  CHECK_FALSE(rep.ok());
  bool box = false, dyn = false;
  for (const auto &v : rep.violations) {
    box |= v.constraint.find("max") != std::string::npos;
    dyn |= v.constraint.find("dynamics") != std::string::npos;
  }
  CHECK(box);
  CHECK(dyn);

  bad = s;
  bad.idis[0][1] = -5.0; // discharge while charging, and no V2G
  CHECK_FALSE(audit(p, bad).ok());
}

TEST_CASE("heuristic capabilities") {
  SimConfig pst = default_config();
  pst.sim_length = 20;
  Simulator sim(pst);
  Alap alap;
  sim.reset(1);
  CHECK_THROWS_AS(alap.reset(sim), CapabilityError);
  Mpc mpc;
  CHECK_THROWS_AS(mpc.reset(sim), CapabilityError);
  CHECK(Mpc(10).name() == "mpc:10");
  CHECK(make_heuristic("rr")->name() == "rr");
  CHECK_THROWS(make_heuristic("greedy"));
}

TEST_CASE("AFAP charges at full current") {
  SimConfig cfg = testing::single_evse_config(Problem::Pst, 4);
  auto ev = testing::linear_spec(60.0, false);
  Replay r = testing::make_replay(cfg, {testing::session_at(0, ev, 1, 4, 20.0, 40.0)});
  Afap afap;
  auto tr = resimulate(r, afap);
  CHECK(tr.steps[1].amps[0] == 32.0);
  CHECK(tr.steps[0].amps[0] == 0.0);
}

TEST_CASE("ALAP waits, then meets the target") {
  SimConfig cfg = testing::single_evse_config(Problem::Profit, 10);
  auto ev = testing::linear_spec(60.0, false);
  const double kw = 32.0 * cfg.chargers[0].kw_per_amp();
  Replay r = testing::make_replay(
      cfg, {testing::session_at(0, ev, 1, 10, 20.0, 20.0 + 2.5 * kw * 0.25)});
  Alap alap;
  auto tr = resimulate(r, alap);
  CHECK(tr.steps[1].amps[0] == 0.0);
  CHECK(tr.steps[6].amps[0] == 0.0);
  CHECK(tr.steps[7].amps[0] > 0.0);
  auto d = tr.departures();
  REQUIRE(d.size() == 1);
  CHECK(d[0].satisfaction() == doctest::Approx(1.0));
}

TEST_CASE("round robin stays within the setpoint") {
  SimConfig cfg = default_config();
  cfg.sim_length = 60;
  Simulator sim(cfg);
  RoundRobin rr;
  const auto &tr = run_episode(sim, rr, 5);
  for (const auto &s : tr.steps)
    CHECK(s.total_ev_kw <= s.setpoint_kw + 1e-9);
}

TEST_CASE("MPC never loses money against AFAP on a valley") {
  SimConfig cfg = testing::profit_config(6);
  cfg.sim_length = 48;
  Simulator sim(cfg);
  Afap afap;
  run_episode(sim, afap, 3);
  Replay r = sim.replay();
  Mpc mpc;
  auto m_mpc = metrics::compute_metrics(resimulate(r, mpc));
  auto m_afap = metrics::compute_metrics(sim.trace());
  CHECK(m_mpc.profits_eur >= m_afap.profits_eur);
  CHECK(mpc.fallbacks() == 0);
}

TEST_CASE("optimal tracking beats the heuristics and satisfies everyone") {
  SimConfig cfg = default_config();
  cfg.sim_length = 48;
  cfg.setpoint_samples = 5;
  Simulator sim(cfg);
  Afap afap;
  run_episode(sim, afap, 7);
  Replay r = sim.replay();
  auto opt = run_optimal(r);
  CHECK(audit(opt.problem, opt.solution).ok());
  auto m = metrics::compute_metrics(opt.trace);
  auto ma = metrics::compute_metrics(sim.trace());
  REQUIRE(m.user_satisfaction);
  CHECK(*m.user_satisfaction == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(*m.tracking_abs_kwh < *ma.tracking_abs_kwh);
}

TEST_CASE("without a taper the optimal plan replays to its objective") {
  SimConfig cfg = default_config();
  cfg.sim_length = 48;
  cfg.setpoint_samples = 5;
  cfg.ev_spec_source = "custom";
  cfg.custom_specs = {testing::linear_spec(60.0, false)};
  Simulator sim(cfg);
  Afap afap;
  run_episode(sim, afap, 7);
  auto opt = run_optimal(sim.replay());
  auto m = metrics::compute_metrics(opt.trace);
  CHECK(*m.tracking_sq == doctest::Approx(opt.solution.objective).epsilon(1e-6));
}

TEST_CASE("batch runner matches the serial reference") {
  parallel::BatchSpec spec;
  spec.config = default_config();
  spec.config.sim_length = 30;
  spec.config.setpoint_samples = 3;
  spec.algorithms = {"afap", "rr"};
  spec.runs = 3;
  spec.seed_base = 40;
  auto a = parallel::run_batch(spec);
  auto b = parallel::run_batch_serial(spec);
  REQUIRE(a.size() == 6);
  REQUIRE(b.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].row.seed == 40 + i / 2);
    CHECK(a[i].row.algorithm == spec.algorithms[i % 2]);
    CHECK(a[i].row.error.empty());
    auto x = metrics::metric_values(a[i].row.metrics);
    auto y = metrics::metric_values(b[i].row.metrics);
    CHECK(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("batch reports failures per run") {
  auto res = parallel::run_algorithm(default_config(), "alap", 1);
  CHECK_FALSE(res.row.error.empty());
  CHECK(parallel::known_algorithm("mpc:12"));
  CHECK_FALSE(parallel::known_algorithm("mpc:x"));
}

}
