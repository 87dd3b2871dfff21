// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace v2g::ev {

enum class ChargeMode { AC, DC };

/// Static description of an EV model. Discharge limits are stored as
/// magnitudes (kW >= 0); simulated discharge power is negative.
struct EvSpec {
  std::string model_name;
  double max_capacity_kwh = 50.0;
  double min_capacity_kwh = 5.0;
  double max_ac_charge_kw = 11.0;
  double min_ac_charge_kw = 0.0;
  double max_dc_charge_kw = 50.0;
  double min_dc_charge_kw = 0.0;
  double max_discharge_kw = 0.0;
  double min_discharge_kw = 0.0;
  double charge_efficiency = 1.0;
  double discharge_efficiency = 1.0;
  /// SoC where charging switches from constant current to constant voltage.
  double transition_soc = 0.8;
  std::int64_t sales_weight = 0;

  bool can_discharge() const { return max_discharge_kw > 0.0; }
  double max_charge_kw(ChargeMode m) const {
    return m == ChargeMode::AC ? max_ac_charge_kw : max_dc_charge_kw;
  }
  double min_charge_kw(ChargeMode m) const {
    return m == ChargeMode::AC ? min_ac_charge_kw : min_dc_charge_kw;
  }

  /// Throws ConfigError("ev.<field>") on violated invariants.
  void validate() const;

  bool operator==(const EvSpec &) const = default;
};

/// One EV's stay at an EVSE. Histories hold one entry per connected step:
/// the SoC at the start of the step and the power delivered during it.
struct EvSession {
  int id = -1;
  EvSpec spec;
  double energy_kwh = 0.0;
  double arrival_energy_kwh = 0.0;
  double target_energy_kwh = 0.0;
  int arrival_step = 0;
  int departure_step = 1;
  double battery_age_days = 730.0;
  std::vector<double> soc_history;
  std::vector<double> power_history;

  double soc() const { return energy_kwh / spec.max_capacity_kwh; }
  double target_soc() const {
    return target_energy_kwh / spec.max_capacity_kwh;
  }

  bool operator==(const EvSession &) const = default;
};

/// P = eta * I * V * sqrt(phases) / 1000, in kW. Sign follows the current.
double power_from_current(double amps, double volts, int phases,
                          double efficiency);

/// Inverse of power_from_current.
double current_from_power(double kw, double volts, int phases,
                          double efficiency);

/// Energy after one step of the two-stage battery model. Below the
/// transition SoC (or when discharging) the update is E + P*dt exactly;
/// at or above it, charging follows the exponential constant-voltage taper.
/// The result is clamped to [min_capacity, max_capacity].
double step_energy(const EvSpec &spec, double energy_kwh, double power_kw,
                   double dt_hours);

/// SoC after one step; see step_energy.
double step_soc(const EvSession &session, double power_kw, double dt_hours);

struct PowerClamp {
  double kw = 0.0;
  bool limited = false;  // magnitude reduced by a max or capacity bound
  bool snapped = false;  // below the EV's minimum power, forced to zero
  bool refused = false;  // discharge requested from a non-V2G EV
};

/// Applies the EV-side power limits: max power per mode, min-power snap to
/// zero, and capacity bounds so that E stays within [E_min, E_max] over the
/// step under linear bookkeeping.
PowerClamp clamp_ev_power(const EvSession &session, double requested_kw,
                          ChargeMode mode, double dt_hours);

/// Battery aging constants. Temperature is in degrees Celsius.
struct DegradationParams {
  double e0 = 6.23e6;
  double e1 = 1.38e6;
  double e2 = 6976.0;
  double temperature_c = 28.0;
  double z0 = 4.02e-4;
  double z1 = 2.04e-3;
  double lifetime_throughput_kwh = 11160.0;

  bool operator==(const DegradationParams &) const = default;
};

/// Calendar capacity loss over `days` for a battery `age_days` old, floored
/// at zero. The Arrhenius term uses the temperature in Kelvin.
double calendar_loss(double avg_soc, double days, double age_days,
                     const DegradationParams &p);

/// Cyclic capacity loss from left-Riemann sums over the connected steps.
/// Time in the deviation term is measured in days; throughput in kWh.
double cyclic_loss(std::span<const double> soc_series,
                   std::span<const double> power_series, double dt_hours,
                   const DegradationParams &p);

struct Degradation {
  double calendar = 0.0;
  double cyclic = 0.0;
  double total() const { return calendar + cyclic; }
};

Degradation total_degradation(const EvSession &session, double dt_hours,
                              const DegradationParams &p);

} // namespace v2g::ev
