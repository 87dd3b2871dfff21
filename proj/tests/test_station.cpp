// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "v2gsim/station/station.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace v2g::station;

TEST_SUITE("station") {

TEST_CASE("action decoding") {
  ChargerSpec cs;
  CHECK(decode_action(0.5, cs, true, ActionRange::Unipolar).amps == 16.0);
  CHECK(decode_action(-0.5, cs, true, ActionRange::Bipolar).amps == -16.0);
  auto d = decode_action(-0.5, cs, true, ActionRange::Unipolar);
  CHECK(d.amps == 0.0);
  CHECK(d.clamped);
  CHECK(decode_action(1.7, cs, true, ActionRange::Bipolar).amps == 32.0);
  CHECK(decode_action(0.9, cs, false, ActionRange::Bipolar).amps == 0.0);
}

TEST_CASE("encode inverts decode") {
  ChargerSpec cs;
  cs.max_charge_current = 29.0;
  cs.max_discharge_current = -23.0;
  for (double amps : {0.0, 1.0, 7.3, 16.0, 28.999, 29.0, -3.1, -23.0}) {
    double a = encode_current(amps, cs);
    double back = decode_action(a, cs, true, ActionRange::Bipolar).amps;
    CHECK(std::abs(back) >= std::abs(amps));
    CHECK(back == doctest::Approx(amps).epsilon(1e-14));
  }
}

TEST_CASE("dead-band and clipping") {
  ChargerSpec cs;
  cs.evse_count = 3;
  cs.min_charge_current = 6.0;
  cs.min_discharge_current = -6.0;
  cs.max_station_current = 100.0;
  std::vector<double> req{4.0, 40.0, -3.0};
  auto r = apply_station_limits(req, cs);
  CHECK(r.currents == std::vector<double>{0.0, 32.0, 0.0});
  CHECK(r.flags[0] == kDeadBand);
  CHECK(r.flags[1] == kClipped);
  CHECK(r.flags[2] == kDeadBand);
  CHECK(r.scale == 1.0);
}

TEST_CASE("proportional normalization of the charging side") {
  ChargerSpec cs;
  cs.evse_count = 3;
  cs.max_station_current = 48.0;
  std::vector<double> req{32.0, 32.0, -16.0};
  auto r = apply_station_limits(req, cs);
  // (48 + 16) / 64
  CHECK(r.scale == doctest::Approx(1.0));
  req = {32.0, 32.0, 0.0};
  r = apply_station_limits(req, cs);
  CHECK(r.scale == doctest::Approx(0.75));
  CHECK(r.currents[0] == doctest::Approx(24.0));
  CHECK(r.currents[1] == doctest::Approx(24.0));
  CHECK((r.flags[0] & kNormalized) != 0);
}

TEST_CASE("normalization can push a current into the dead-band") {
  ChargerSpec cs;
  cs.evse_count = 2;
  cs.min_charge_current = 6.0;
  cs.max_station_current = 20.0;
  std::vector<double> req{32.0, 6.0};
  auto r = apply_station_limits(req, cs);
  CHECK(r.scale == doctest::Approx(20.0 / 38.0));
  CHECK(r.currents[1] == 0.0);
  CHECK((r.flags[1] & kDeadBand) != 0);
}

TEST_CASE("discharge side normalization") {
  ChargerSpec cs;
  cs.evse_count = 2;
  cs.min_station_current = -40.0;
  std::vector<double> req{-32.0, -32.0};
  auto r = apply_station_limits(req, cs);
  CHECK(r.currents[0] == doctest::Approx(-20.0));
  CHECK(r.currents[1] == doctest::Approx(-20.0));
}

TEST_CASE("cash flow signs") {
  CHECK(session_cashflow(10.0, 0.25, 0.2, 0.3) == doctest::Approx(-0.5));
  CHECK(session_cashflow(-10.0, 0.25, 0.2, 0.3) == doctest::Approx(0.75));
  CHECK(session_cashflow(0.0, 0.25, 0.2, 0.3) == 0.0);
}

TEST_CASE("builtin prices") {
  v2g::CalendarTime start;
  start.hour = 0;
  auto p = builtin_prices(start, 15, 96 * 7, 0.9);
  REQUIRE(p.charge.size() == 96 * 7);
  for (std::size_t t = 0; t < p.charge.size(); ++t) {
    CHECK(p.charge[t] > 0.0);
    CHECK(p.discharge[t] == doctest::Approx(0.9 * p.charge[t]));
  }
  // evening peak above the night trough
  CHECK(p.charge[19 * 4] > p.charge[3 * 4]);
  // constant within an hour
  CHECK(p.charge[8 * 4] == p.charge[8 * 4 + 3]);
}

TEST_CASE("charger validation") {
  ChargerSpec cs;
  cs.max_discharge_current = 5.0;
  CHECK_THROWS_AS(cs.validate("charging_station.chargers[0]"),
                  std::invalid_argument);
}

}
