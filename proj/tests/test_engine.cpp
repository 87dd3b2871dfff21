// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "checks.hpp"
#include "support.hpp"

#include "v2gsim/baselines/heuristics.hpp"
#include "v2gsim/common/errors.hpp"
#include "v2gsim/engine/simulator.hpp"
#include "v2gsim/metrics/metrics.hpp"

#include <cstring>

using namespace v2g;

namespace {

bool same_values(const metrics::Metrics &a, const metrics::Metrics &b) {
  auto x = metrics::metric_values(a);
  auto y = metrics::metric_values(b);
  return std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
}

SimConfig small_config() {
  SimConfig c = default_config();
  c.sim_length = 40;
  c.setpoint_samples = 3;
  return c;
}

} // namespace

TEST_SUITE("engine") {

TEST_CASE("same seed, same metrics") {
  Simulator a(small_config()), b(small_config());
  baselines::Afap ca, cb;
  auto ma = metrics::compute_metrics(run_episode(a, ca, 9));
  auto mb = metrics::compute_metrics(run_episode(b, cb, 9));
  CHECK(same_values(ma, mb));
  CHECK(testing::same_trace(a.trace(), b.trace()));
  CHECK(ma.departed > 0);
}

TEST_CASE("different seeds differ") {
  Simulator a(small_config());
  baselines::Afap c;
  auto m1 = metrics::compute_metrics(run_episode(a, c, 1));
  auto m2 = metrics::compute_metrics(run_episode(a, c, 2));
  CHECK_FALSE(same_values(m1, m2));
}

TEST_CASE("replay reproduces the trace bit for bit") {
  for (auto cfg : {small_config(), testing::profit_config(6)}) {
    cfg.sim_length = 40;
    cfg.forecast_sigma = 1.5;
    Simulator sim(cfg);
    baselines::RoundRobin rr;
    baselines::Afap afap;
    Controller &ctl = cfg.problem == Problem::Pst ? static_cast<Controller &>(rr)
                                                  : static_cast<Controller &>(afap);
    run_episode(sim, ctl, 4);
    Replay r = sim.replay();
    SimTrace again = resimulate(r, ctl);
    CHECK(testing::same_trace(sim.trace(), again));
    // through JSON as well
    Replay parsed = parse_replay(dump_replay(r));
    CHECK(parsed == r);
    CHECK(testing::same_trace(sim.trace(), resimulate(parsed, ctl)));
  }
}

TEST_CASE("replay under another controller keeps the EV schedule") {
  Simulator sim(small_config());
  baselines::Afap afap;
  run_episode(sim, afap, 12);
  Replay r = sim.replay();

  Simulator other(small_config());
  baselines::RoundRobin rr;
  other.reset(r);
  rr.reset(other);
  while (!other.done())
    other.step(rr.act(other), rr.step_flags());
  Replay r2 = other.replay();
  CHECK(r2.sessions == r.sessions);
  CHECK(r2.series == r.series);
  CHECK(r2.dropped == r.dropped);
  CHECK_FALSE(testing::same_trace(sim.trace(), other.trace()));
}

TEST_CASE("replay with another configuration is rejected") {
  Simulator sim(small_config());
  sim.reset(1);
  Replay r = sim.replay();
  SimConfig c = small_config();
  c.sim_length = 41;
  Simulator other(c);
  CHECK_THROWS_AS(other.reset(r), ReplayError);
}

TEST_CASE("step after done") {
  SimConfig c = small_config();
  c.sim_length = 3;
  Simulator sim(c);
  sim.reset(0);
  std::vector<double> a(sim.slot_count(), 0.0);
  for (int t = 0; t < 3; ++t)
    sim.step(a);
  CHECK(sim.done());
  CHECK_THROWS_AS(sim.step(a), SimulationError);
}

TEST_CASE("wrong action length") {
  Simulator sim(small_config());
  sim.reset(0);
  std::vector<double> a(sim.slot_count() + 1, 0.0);
  CHECK_THROWS(sim.step(a));
}

TEST_CASE("trace invariants") {
  Simulator sim(small_config());
  baselines::Afap afap;
  const auto &tr = run_episode(sim, afap, 3);
  REQUIRE(tr.steps.size() == 40);
  for (const auto &s : tr.steps) {
    double total = 0.0;
    for (std::size_t k = 0; k < s.power_kw.size(); ++k) {
      total += s.power_kw[k];
      if (s.session_ids[k] < 0)
        CHECK(s.power_kw[k] == 0.0);
    }
    CHECK(s.total_ev_kw == doctest::Approx(total));
    for (double o : s.overload_kw)
      CHECK(o >= 0.0);
  }
  for (const auto &d : tr.departures()) {
    CHECK(d.departure_step > d.arrival_step);
    CHECK(d.energy_kwh <= d.capacity_kwh + 1e-12);
  }
}

}
