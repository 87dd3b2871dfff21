// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/common/calendar.hpp"
#include "v2gsim/ev/ev_model.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace v2g::station {

using ChargerType = ev::ChargeMode;

/// Electrical description of one charging station. Discharge currents are
/// negative: min_discharge_current is the dead-band edge (e.g. -6 A) and
/// max_discharge_current the largest magnitude (e.g. -32 A).
struct ChargerSpec {
  std::string id;
  int transformer = 0;
  int evse_count = 1;
  ChargerType type = ChargerType::AC;
  double voltage = 230.0;
  int phases = 3;
  double min_station_current = -32.0;
  double max_station_current = 32.0;
  double min_charge_current = 0.0;
  double max_charge_current = 32.0;
  double min_discharge_current = 0.0;
  double max_discharge_current = -32.0;

  /// kW per ampere at unit efficiency.
  double kw_per_amp() const;

  void validate(const std::string &field) const;
  bool operator==(const ChargerSpec &) const = default;
};

/// Problem-dependent admissible action range.
enum class ActionRange { Unipolar, Bipolar }; // [0,1] or [-1,1]

struct DecodedAction {
  double amps = 0.0;
  bool clamped = false; // input was outside the admissible range
};

/// Maps a normalized action onto an EVSE current: positive values scale
/// [0, max_charge_current], negative values scale [0, max_discharge_current].
/// An empty slot always decodes to 0 A.
DecodedAction decode_action(double action, const ChargerSpec &spec,
                            bool occupied, ActionRange range);

/// Smallest action in the admissible direction whose decoded current is at
/// least `amps` in magnitude (inverse of decode_action).
double encode_current(double amps, const ChargerSpec &spec);

enum LimitFlag : std::uint8_t {
  kDeadBand = 1u << 0,
  kClipped = 1u << 1,
  kNormalized = 1u << 2,
};

struct StationLimits {
  std::vector<double> currents;
  std::vector<std::uint8_t> flags;
  double scale = 1.0; // factor applied to the violating side (1 if none)
};

/// Dead-band, per-EVSE clipping, then one proportional normalization pass
/// on the side (charge or discharge) that violates the station bounds.
/// Currents pushed into the dead-band by the scaling are zeroed without
/// re-normalizing.
StationLimits apply_station_limits(std::span<const double> requested,
                                   const ChargerSpec &spec);

/// Cash flow in EUR for one step: charging pays P*c_ch*dt, discharging
/// (P < 0) earns |P|*c_dis*dt. Prices are nonnegative magnitudes.
double session_cashflow(double power_kw, double dt_hours, double charge_price,
                        double discharge_price);

struct PriceSeries {
  std::vector<double> charge;
  std::vector<double> discharge;
};

/// Synthetic day-ahead tariff in EUR/kWh with a night trough, a midday
/// solar dip and morning/evening peaks; weekends are cheaper.
PriceSeries builtin_prices(const CalendarTime &start, int timescale_minutes,
                           int length, double discharge_price_factor);

/// CSV columns: step_or_timestamp,charge_price_eur_per_kwh,
/// discharge_price_eur_per_kwh.
PriceSeries load_price_csv(const std::string &path, const CalendarTime &start,
                           int timescale_minutes, int length);

} // namespace v2g::station
