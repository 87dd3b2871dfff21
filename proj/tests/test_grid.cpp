// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "v2gsim/grid/grid.hpp"

#include <random>

using namespace v2g::grid;

TEST_SUITE("grid") {

TEST_CASE("overload against the DR-reduced limit") {
  TransformerSpec spec;
  spec.max_power_kw = 100.0;
  TransformerSeries s;
  s.load = {20.0, 20.0};
  s.pv = {-5.0, 0.0};
  s.dr = {0.0, 30.0};
  CHECK(net_power(s, 0, 50.0) == doctest::Approx(65.0));
  CHECK(overload(spec, s, 0, 65.0) == 0.0);
  CHECK(upper_limit(spec, s, 1) == doctest::Approx(70.0));
  CHECK(overload(spec, s, 1, 90.0) == doctest::Approx(20.0));
  CHECK(lower_violation(spec, -120.0) == doctest::Approx(20.0));
}

TEST_CASE("forecasts") {
  std::vector<double> truth{1.0, 2.0, 3.0};
  std::mt19937_64 rng(1);
  auto f = forecast(truth, 1, 4, 0.0, rng);
  CHECK(f == std::vector<double>{2.0, 3.0, 3.0, 3.0});
  auto g = forecast(truth, 0, 3, 1.0, rng);
  CHECK(g.size() == 3);
  CHECK(g != std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("DR visibility follows the notice") {
  auto dr = dr_series(DrEvent{5, 3, 10.0}, 12);
  CHECK(dr == std::vector<double>{0, 0, 0, 0, 0, 10, 10, 10, 0, 0, 0, 0});
  auto v = visible_dr(dr, 2, 6, 3);
  CHECK(v == std::vector<double>{0, 0, 0, 10, 0, 0});
  v = visible_dr(dr, 4, 4, 3);
  CHECK(v == std::vector<double>{0, 10, 10, 10});
}

TEST_CASE("builtin profiles") {
  v2g::CalendarTime start;
  start.hour = 0;
  std::mt19937_64 rng(3);
  auto pv = builtin_pv(start, 15, 96, 40.0, rng);
  auto load = builtin_load(start, 15, 96, 40.0, rng);
  for (int t = 0; t < 96; ++t) {
    CHECK(pv[t] <= 0.0);
    CHECK(load[t] >= 0.0);
  }
  CHECK(pv[2 * 4] == 0.0);
  CHECK(pv[13 * 4] < 0.0);
}

}
