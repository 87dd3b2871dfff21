// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/common/calendar.hpp"
#include "v2gsim/ev/ev_model.hpp"
#include "v2gsim/station/station.hpp"

#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace v2g::behavior {

enum class Scenario { Public, Workplace, Residential, Custom };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string &s);

/// Binned session statistics. Histogram rows are indexed by arrival hour of
/// day (0-23); each row sums to 1. Bin k spans (edges[k-1], edges[k]] with
/// an implicit lower edge of 0 for the first bin.
struct BehaviorModel {
  Scenario scenario = Scenario::Public;
  /// Expected arrivals per EVSE per hour, indexed by hour of week
  /// (0 = Monday 00:00).
  std::vector<double> arrival_rate = std::vector<double>(168, 0.0);
  std::vector<double> stay_edges_minutes;
  std::vector<std::vector<double>> stay_prob;
  std::vector<double> soc_edges;
  std::vector<std::vector<double>> soc_prob;
  double desired_soc = 1.0;

  /// Renormalizes histogram rows; throws DataError on negative cells,
  /// all-zero rows or malformed shapes.
  void normalize(const std::string &origin = "behavior");

  bool operator==(const BehaviorModel &) const = default;
};

BehaviorModel default_behavior(Scenario s);

/// Reads arrivals.csv, stay.csv and soc.csv from `dir`.
BehaviorModel load_behavior_csv(const std::filesystem::path &dir,
                                 Scenario scenario = Scenario::Custom);
void export_behavior_csv(const std::filesystem::path &dir,
                         const BehaviorModel &model);

/// Index of the histogram bin drawn from `row`.
int draw_bin(const std::vector<double> &row, std::mt19937_64 &rng);

double draw_stay_minutes(const BehaviorModel &m, int hour_of_day,
                         std::mt19937_64 &rng);
double draw_arrival_soc(const BehaviorModel &m, int hour_of_day,
                        std::mt19937_64 &rng);

/// Index into `registry`, drawn with probability proportional to sales.
std::size_t sample_spec(const std::vector<ev::EvSpec> &registry,
                        std::mt19937_64 &rng);

/// Desired departure energy for a new session before reachability capping.
using TargetRule = std::function<double(const ev::EvSpec &spec,
                                        double arrival_energy_kwh,
                                        int arrival_hour)>;

struct FreeSlot {
  int slot = 0;
  const station::ChargerSpec *charger = nullptr;
};

struct ArrivalContext {
  int arrival_step = 0; // step at which the new EVs are connected
  int sim_length = 1;
  int timescale_minutes = 15;
  CalendarTime start;
  int total_evse = 1;
  double battery_age_days = 730.0;
};

struct Placed {
  int slot = 0;
  ev::EvSession session;
};

struct ArrivalDraw {
  std::vector<Placed> sessions;
  int dropped = 0; // arrivals that found no free EVSE
};

/// Highest power (kW) an EV can draw from one EVSE of `charger`.
double max_session_power(const ev::EvSpec &spec,
                         const station::ChargerSpec &charger);

/// Draws the arrivals for ctx.arrival_step: a Poisson count with mean
/// rate * total_evse * dt_hours, truncated to the free slots. Each session's
/// stay is extended if needed so the target is reachable at full power,
/// capped at the horizon, and the target is then capped at the reachable
/// energy. Spec draws use `spec_rng`; everything else uses `rng`.
ArrivalDraw sample_arrivals(const BehaviorModel &model,
                            const std::vector<ev::EvSpec> &registry,
                            const std::vector<FreeSlot> &free_slots,
                            const ArrivalContext &ctx, const TargetRule &rule,
                            std::mt19937_64 &rng, std::mt19937_64 &spec_rng);

TargetRule default_target_rule(double desired_soc);

} // namespace v2g::behavior
