// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "support.hpp"

#include "v2gsim/common/errors.hpp"
#include "v2gsim/rl/encoders.hpp"
#include "v2gsim/rl/env.hpp"
#include "v2gsim/rl/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace v2g;

TEST_SUITE("rl") {

TEST_CASE("reward constants") {
  StepRecord r;
  DepartureRecord d;
  d.capacity_kwh = 50.0;
  d.energy_kwh = 40.0;
  d.target_energy_kwh = 40.0;
  r.departures.push_back(d);
  CHECK(rl::reward_profit(r, 0.25) == doctest::Approx(-100.0 * std::exp(-10.0)).epsilon(1e-15));

  StepRecord o;
  o.overload_kw = {4.0}; // 1 kWh over a 15-minute step
  CHECK(rl::reward_profit(o, 0.25) == doctest::Approx(-100.0));

  StepRecord p;
  p.setpoint_kw = 10.0;
  p.total_ev_kw = 7.0;
  CHECK(rl::reward_pst(p) == -9.0);
}

TEST_CASE("observation sizes") {
  CHECK(rl::pst_observation_size(10) == 33);
  CHECK(rl::profit_observation_size(25, 2, 10) == 2 + 25 + 100 + 20);

  SimConfig pst = default_config();
  rl::Env env(pst);
  CHECK(env.observation_space().size == 3 + 3 * 10);
  CHECK(env.action_space().size == 10);
  CHECK(env.action_space().low == 0.0);
  CHECK(env.reset(1).size() == env.observation_space().size);

  rl::Env profit(testing::profit_config(4));
  CHECK(profit.observation_space().size == 2 + 25 + 2 * 25 + 2 * 4);
  CHECK(profit.action_space().low == -1.0);
  CHECK(profit.reset(1).size() == profit.observation_space().size);
}

TEST_CASE("step before reset") {
  rl::Env env(default_config());
  std::vector<double> a(10, 0.0);
  CHECK_THROWS_AS(env.step(a), SimulationError);
}

TEST_CASE("tracking episode return is minus the squared error") {
  SimConfig c = default_config();
  rl::Env env(c);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  env.reset(21);
  double ret = 0.0;
  while (!env.done()) {
    std::vector<double> a(env.action_space().size);
    for (double &x : a)
      x = u(rng);
    auto s = env.step(a);
    ret += s.reward;
    CHECK(s.observation.size() == env.observation_space().size);
  }
  auto m = env.metrics();
  REQUIRE(m.tracking_sq);
  CHECK(ret == -*m.tracking_sq);
}

TEST_CASE("profit rewards add up to the cash flow and penalties") {
  SimConfig c = testing::profit_config(4);
  c.sim_length = 40;
  rl::Env env(c);
  env.reset(2);
  double ret = 0.0;
  double penalties = 0.0;
  std::vector<double> a(4, 1.0);
  while (!env.done()) {
    auto s = env.step(a);
    ret += s.reward;
    const auto &r = env.simulator().trace().steps.back();
    for (double o : r.overload_kw)
      penalties += 100.0 * o * 0.25;
    for (const auto &d : r.departures)
      penalties += 100.0 * std::exp(-10.0 * std::min(d.energy_kwh / d.target_energy_kwh, 1.0));
  }
  auto m = env.metrics();
  CHECK(ret == doctest::Approx(m.profits_eur - penalties));
  CHECK(m.profits_eur < 0.0);
}

}
