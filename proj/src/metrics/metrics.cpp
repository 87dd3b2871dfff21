// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/metrics/metrics.hpp"

#include "v2gsim/common/csv.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace v2g::metrics {

Metrics compute_metrics(const SimTrace &trace) {
  Metrics m;
  const double dt = trace.dt_hours;
  double abs_err = 0.0;
  double sq_err = 0.0;
  double sat_sum = 0.0;
  for (const auto &s : trace.steps) {
    for (double p : s.power_kw) {
      if (p > 0.0)
        m.energy_charged_kwh += p * dt;
      else
        m.energy_discharged_kwh -= p * dt;
    }
    m.profits_eur += s.cashflow;
    for (double o : s.overload_kw)
      m.overload_kwh += o * dt;
    for (double l : s.lower_violation_kw)
      m.lower_violation_kwh += l * dt;
    const double e = s.setpoint_kw - s.total_ev_kw;
    abs_err += std::abs(e) * dt;
    sq_err += e * e;
    for (const auto &d : s.departures) {
      sat_sum += d.satisfaction();
      m.calendar_loss += d.degradation.calendar;
      m.cyclic_loss += d.degradation.cyclic;
      ++m.departed;
    }
    m.dropped_arrivals += s.dropped_arrivals;
  }
  m.capacity_loss = m.calendar_loss + m.cyclic_loss;
  if (m.departed > 0)
    m.user_satisfaction = sat_sum / m.departed;
  if (trace.has_setpoint) {
    m.tracking_abs_kwh = abs_err;
    m.tracking_sq = sq_err;
  }
  return m;
}

const std::vector<std::string> &metric_columns() {
  static const std::vector<std::string> cols = {
      "energy_charged_kwh", "energy_discharged_kwh", "user_satisfaction",
      "profits_eur",        "overload_kwh",          "tracking_abs_kwh",
      "tracking_sq",        "capacity_loss",         "calendar_loss",
      "cyclic_loss",        "lower_violation_kwh",   "departed",
      "dropped_arrivals"};
  return cols;
}

std::vector<double> metric_values(const Metrics &m) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return {m.energy_charged_kwh,
          m.energy_discharged_kwh,
          m.user_satisfaction.value_or(nan),
          m.profits_eur,
          m.overload_kwh,
          m.tracking_abs_kwh.value_or(nan),
          m.tracking_sq.value_or(nan),
          m.capacity_loss,
          m.calendar_loss,
          m.cyclic_loss,
          m.lower_violation_kwh,
          static_cast<double>(m.departed),
          static_cast<double>(m.dropped_arrivals)};
}

namespace {

std::string cell(double v) {
  return std::isnan(v) ? std::string("NA") : csv::format_exact(v);
}

} // namespace

void write_runs_csv(const std::filesystem::path &path,
                    const std::vector<RunRow> &rows) {
  csv::Table t;
  t.header = {"seed", "algorithm"};
  for (const auto &c : metric_columns())
    t.header.push_back(c);
  t.header.push_back("error");
  for (const auto &r : rows) {
    std::vector<std::string> line{std::to_string(r.seed), r.algorithm};
    for (double v : metric_values(r.metrics))
      line.push_back(r.error.empty() ? cell(v) : std::string("NA"));
    line.push_back(r.error);
    t.rows.push_back(std::move(line));
  }
  csv::write(path, t);
}

std::vector<Summary> aggregate(const std::vector<RunRow> &rows) {
  std::vector<Summary> out;
  std::vector<std::vector<std::vector<double>>> samples;
  for (const auto &r : rows) {
    std::size_t g = 0;
    while (g < out.size() && out[g].algorithm != r.algorithm)
      ++g;
    if (g == out.size()) {
      out.push_back({r.algorithm, 0, {}, {}});
      samples.emplace_back(metric_columns().size());
    }
    if (!r.error.empty())
      continue;
    ++out[g].runs;
    auto v = metric_values(r.metrics);
    for (std::size_t c = 0; c < v.size(); ++c)
      if (!std::isnan(v[c]))
        samples[g][c].push_back(v[c]);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t g = 0; g < out.size(); ++g) {
    for (const auto &xs : samples[g]) {
      if (xs.empty()) {
        out[g].mean.push_back(nan);
        out[g].stdev.push_back(nan);
        continue;
      }
      double sum = 0.0;
      for (double x : xs)
        sum += x;
      const double mean = sum / static_cast<double>(xs.size());
      double ss = 0.0;
      for (double x : xs)
        ss += (x - mean) * (x - mean);
      out[g].mean.push_back(mean);
      out[g].stdev.push_back(
          xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1))
                        : 0.0);
    }
  }
  return out;
}

void write_summary_csv(const std::filesystem::path &path,
                       const std::vector<Summary> &summaries) {
  csv::Table t;
  t.header = {"algorithm", "runs"};
  for (const auto &c : metric_columns()) {
    t.header.push_back(c + "_mean");
    t.header.push_back(c + "_std");
  }
  for (const auto &s : summaries) {
    std::vector<std::string> line{s.algorithm, std::to_string(s.runs)};
    for (std::size_t c = 0; c < s.mean.size(); ++c) {
      line.push_back(cell(s.mean[c]));
      line.push_back(cell(s.stdev[c]));
    }
    t.rows.push_back(std::move(line));
  }
  csv::write(path, t);
}

std::string format_summary(const std::vector<Summary> &summaries) {
  std::string out;
  char buf[64];
  const auto &cols = metric_columns();
  for (const auto &s : summaries) {
    out += s.algorithm + " (" + std::to_string(s.runs) + " runs)\n";
    for (std::size_t c = 0; c < cols.size() && c < s.mean.size(); ++c) {
      if (std::isnan(s.mean[c]))
        std::snprintf(buf, sizeof buf, "%s", "n/a");
      else
        std::snprintf(buf, sizeof buf, "%.4g ±%.3g", s.mean[c], s.stdev[c]);
      out += "  " + cols[c] + ": " + buf + "\n";
    }
  }
  return out;
}

} // namespace v2g::metrics
