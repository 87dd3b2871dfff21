// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "v2gsim/engine/trace.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace v2g::metrics {

struct Metrics {
  double energy_charged_kwh = 0.0;
  double energy_discharged_kwh = 0.0;
  std::optional<double> user_satisfaction; // undefined without departures
  double profits_eur = 0.0;
  double overload_kwh = 0.0;
  std::optional<double> tracking_abs_kwh;  // sum |P_set - P_tot| * dt
  std::optional<double> tracking_sq;       // sum (P_set - P_tot)^2
  double capacity_loss = 0.0;
  double calendar_loss = 0.0;
  double cyclic_loss = 0.0;
  double lower_violation_kwh = 0.0;
  int departed = 0;
  int dropped_arrivals = 0;
};

Metrics compute_metrics(const SimTrace &trace);

struct RunRow {
  std::uint64_t seed = 0;
  std::string algorithm;
  Metrics metrics;
  std::string error; // nonempty when the run failed
};

/// Column names in export order (after seed and algorithm).
const std::vector<std::string> &metric_columns();

/// Metric values in column order; undefined values are NaN.
std::vector<double> metric_values(const Metrics &m);

void write_runs_csv(const std::filesystem::path &path,
                    const std::vector<RunRow> &rows);

struct Summary {
  std::string algorithm;
  int runs = 0;
  std::vector<double> mean; // per metric column, NaN if never defined
  std::vector<double> stdev; // sample standard deviation
};

/// Groups by algorithm in first-appearance order; failed runs are skipped.
std::vector<Summary> aggregate(const std::vector<RunRow> &rows);

void write_summary_csv(const std::filesystem::path &path,
                       const std::vector<Summary> &summaries);

/// "mean ±std" table, one row per algorithm.
std::string format_summary(const std::vector<Summary> &summaries);

} // namespace v2g::metrics
