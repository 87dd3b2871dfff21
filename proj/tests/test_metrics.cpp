// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "checks.hpp"

#include "v2gsim/metrics/metrics.hpp"

#include <cmath>

using namespace v2g;


TEST_SUITE("metrics") {

TEST_CASE("hand-built trace against independent values") {
  auto tr = testing::hand_built_trace();
  // values computed separately from the same inputs
  const auto &da = tr.steps[2].departures[0].degradation;
  const auto &db = tr.steps[2].departures[1].degradation;
  CHECK(std::abs(da.calendar - 5.383598112994117e-07) < 1e-18);
  CHECK(std::abs(da.cyclic - 1.9924101145387036e-05) < 1e-16);
  CHECK(std::abs(db.calendar - 1.3672239569471833e-06) < 1e-18);
  CHECK(std::abs(db.cyclic - 7.825251938515117e-06) < 1e-16);

  auto m = metrics::compute_metrics(tr);
  CHECK(std::abs(m.energy_charged_kwh - 4.5) < 1e-9);
  CHECK(std::abs(m.energy_discharged_kwh - 2.0) < 1e-9);
  REQUIRE(m.user_satisfaction);
  CHECK(std::abs(*m.user_satisfaction - 0.96875) < 1e-9);
  CHECK(std::abs(m.profits_eur - -0.8375) < 1e-9);
  CHECK(std::abs(m.overload_kwh - 0.375) < 1e-9);
  REQUIRE(m.tracking_abs_kwh);
  CHECK(std::abs(*m.tracking_abs_kwh - 2.75) < 1e-9);
  REQUIRE(m.tracking_sq);
  CHECK(std::abs(*m.tracking_sq - 59.0) < 1e-9);
  CHECK(std::abs(m.capacity_loss - 2.9654936852148746e-05) < 1e-9);
  CHECK(std::abs(m.calendar_loss - 1.905583768246595e-06) < 1e-15);
  CHECK(std::abs(m.cyclic_loss - 2.774935308390215e-05) < 1e-15);
  CHECK(m.departed == 2);
}

TEST_CASE("satisfaction is undefined without departures") {
  SimTrace tr;
  auto m = metrics::compute_metrics(tr);
  CHECK_FALSE(m.user_satisfaction);
  CHECK(m.tracking_sq == 0.0);
  tr.has_setpoint = false;
  CHECK_FALSE(metrics::compute_metrics(tr).tracking_sq);
  auto v = metrics::metric_values(metrics::compute_metrics(tr));
  CHECK(v.size() == metrics::metric_columns().size());
  CHECK(std::isnan(v[2]));
}

TEST_CASE("aggregate is recomputable from the rows") {
  std::vector<metrics::RunRow> rows;
  for (int k = 0; k < 4; ++k) {
    metrics::RunRow r;
    r.seed = k;
    r.algorithm = k % 2 ? "b" : "a";
    r.metrics.energy_charged_kwh = 10.0 * k;
    r.metrics.profits_eur = k * k;
    if (k != 2)
      r.metrics.user_satisfaction = 0.5 + 0.1 * k;
    rows.push_back(r);
  }
  metrics::RunRow failed;
  failed.algorithm = "a";
  failed.error = "boom";
  failed.metrics.energy_charged_kwh = 1e9;
  rows.push_back(failed);

  auto s = metrics::aggregate(rows);
  REQUIRE(s.size() == 2);
  CHECK(s[0].algorithm == "a");
  CHECK(s[0].runs == 2);
  CHECK(s[0].mean[0] == doctest::Approx(10.0));      // (0 + 20) / 2
  CHECK(s[0].stdev[0] == doctest::Approx(std::sqrt(200.0)));
  CHECK(s[0].mean[2] == doctest::Approx(0.5));       // one defined value
  CHECK(s[1].mean[3] == doctest::Approx(5.0));       // (1 + 9) / 2
  CHECK(s[1].mean[2] == doctest::Approx(0.7));
  CHECK(metrics::format_summary(s).find("a") != std::string::npos);
}

}
