// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/behavior/behavior.hpp"

#include "v2gsim/common/csv.hpp"
#include "v2gsim/common/errors.hpp"
#include "v2gsim/common/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace v2g::behavior {

std::string to_string(Scenario s) {
  switch (s) {
  case Scenario::Public:
    return "public";
  case Scenario::Workplace:
    return "workplace";
  case Scenario::Residential:
    return "residential";
  case Scenario::Custom:
    return "custom";
  }
  return "custom";
}

Scenario scenario_from_string(const std::string &s) {
  if (s == "public")
    return Scenario::Public;
  if (s == "workplace")
    return Scenario::Workplace;
  if (s == "residential")
    return Scenario::Residential;
  if (s == "custom")
    return Scenario::Custom;
  throw ConfigError("simulation.scenario",
                    "expected public, workplace, residential or custom");
}

namespace {

void normalize_rows(std::vector<std::vector<double>> &rows,
                    std::size_t bins, const std::string &origin,
                    const char *table) {
  if (rows.size() != 24)
    throw DataError(origin + ": " + table + " needs 24 hour rows");
  for (std::size_t h = 0; h < rows.size(); ++h) {
    auto &row = rows[h];
    if (row.size() != bins)
      throw DataError(origin + ": " + table + " row " + std::to_string(h) +
                      ": expected " + std::to_string(bins) + " bins");
    double sum = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!(row[k] >= 0.0) || !std::isfinite(row[k]))
        throw DataError(origin + ": " + table + " row " + std::to_string(h) +
                        " column " + std::to_string(k + 2) +
                        ": probability must be finite and >= 0");
      sum += row[k];
    }
    if (!(sum > 0.0))
      throw DataError(origin + ": " + table + " row " + std::to_string(h) +
                      ": all-zero row");
    for (double &v : row)
      v /= sum;
  }
}

void check_edges(const std::vector<double> &edges, const std::string &origin,
                 const char *table) {
  if (edges.empty())
    throw DataError(origin + ": " + table + " has no bins");
  double prev = 0.0;
  for (double e : edges) {
    if (!(e > prev))
      throw DataError(origin + ": " + table +
                      " bin edges must be positive and increasing");
    prev = e;
  }
}

// Histogram over (0, edges.back()] from an unnormalized density.
template <class F>
std::vector<double> histogram(const std::vector<double> &edges, F density) {
  std::vector<double> row(edges.size());
  double lo = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    double mid = 0.5 * (lo + edges[k]);
    row[k] = std::max(density(mid), 1e-6) * (edges[k] - lo);
    lo = edges[k];
  }
  double sum = std::accumulate(row.begin(), row.end(), 0.0);
  for (double &v : row)
    v /= sum;
  return row;
}

double gauss(double x, double mu, double sigma) {
  double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z);
}

double lognormal(double x, double median, double shape) {
  if (x <= 0.0)
    return 0.0;
  double z = std::log(x / median) / shape;
  return std::exp(-0.5 * z * z) / x;
}

} // namespace

void BehaviorModel::normalize(const std::string &origin) {
  if (arrival_rate.size() != 168)
    throw DataError(origin + ": arrival table needs 168 hour-of-week rows");
  for (std::size_t i = 0; i < arrival_rate.size(); ++i)
    if (!(arrival_rate[i] >= 0.0) || !std::isfinite(arrival_rate[i]))
      throw DataError(origin + ": arrival row " + std::to_string(i) +
                      ": rate must be finite and >= 0");
  check_edges(stay_edges_minutes, origin, "stay");
  check_edges(soc_edges, origin, "soc");
  if (soc_edges.back() > 1.0)
    throw DataError(origin + ": soc bin edges must not exceed 1");
  normalize_rows(stay_prob, stay_edges_minutes.size(), origin, "stay");
  normalize_rows(soc_prob, soc_edges.size(), origin, "soc");
  if (!(desired_soc > 0.0 && desired_soc <= 1.0))
    throw ConfigError("ev.desired_soc", "must lie in (0, 1]");
}

BehaviorModel default_behavior(Scenario s) {
  BehaviorModel m;
  m.scenario = s;
  for (int k = 1; k <= 24; ++k)
    m.stay_edges_minutes.push_back(60.0 * k);
  for (int k = 1; k <= 10; ++k)
    m.soc_edges.push_back(0.1 * k);

  for (int how = 0; how < 168; ++how) {
    int day = how / 24;
    double h = how % 24 + 0.5;
    bool weekend = day >= 5;
    double rate = 0.0;
    switch (s) {
    case Scenario::Public:
    case Scenario::Custom:
      rate = 0.02 + 0.22 * gauss(h, 10.0, 2.5) + 0.16 * gauss(h, 17.0, 2.5);
      if (weekend)
        rate *= 0.7;
      break;
    case Scenario::Workplace:
      if (h >= 5.0 && h < 19.0) {
        rate = 0.02 + 0.45 * gauss(h, 8.5, 1.3) + 0.08 * gauss(h, 13.0, 1.5);
        if (weekend)
          rate *= 0.15;
      }
      break;
    case Scenario::Residential:
      rate = 0.01 + 0.05 * gauss(h, 8.0, 2.0) + 0.3 * gauss(h, 18.5, 2.0);
      if (weekend)
        rate = 0.02 + 0.12 * gauss(h, 14.0, 4.0);
      break;
    }
    m.arrival_rate[how] = rate;
  }

  for (int hour = 0; hour < 24; ++hour) {
    double h = hour + 0.5;
    double median_hours = 3.0;
    double soc_mean = 0.5;
    switch (s) {
    case Scenario::Public:
    case Scenario::Custom:
      median_hours = h < 16.0 ? 3.0 : 2.0;
      soc_mean = 0.45 + 0.1 * gauss(h, 12.0, 4.0);
      break;
    case Scenario::Workplace:
      // Staying until late afternoon.
      median_hours = std::max(2.0, 17.0 - h);
      soc_mean = 0.6;
      break;
    case Scenario::Residential:
      median_hours = h >= 15.0 ? std::max(4.0, 31.0 - h) : 4.0;
      soc_mean = h >= 15.0 ? 0.4 : 0.6;
      break;
    }
    m.stay_prob.push_back(histogram(m.stay_edges_minutes, [&](double x) {
      return lognormal(x / 60.0, median_hours, 0.45);
    }));
    m.soc_prob.push_back(
        histogram(m.soc_edges, [&](double x) { return gauss(x, soc_mean, 0.18); }));
  }
  return m;
}

namespace {

std::vector<std::vector<double>> read_hist(const std::filesystem::path &path,
                                           std::vector<double> &edges) {
  auto t = csv::read(path);
  const auto origin = path.string();
  if (t.header.size() < 2)
    throw DataError(origin + ": expected hour column plus bins");
  edges.clear();
  for (std::size_t c = 1; c < t.header.size(); ++c)
    edges.push_back(csv::to_double(t.header[c], origin, 1, static_cast<int>(c + 1)));
  std::vector<std::vector<double>> rows(24);
  std::vector<bool> seen(24, false);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto &r = t.rows[i];
    int line = t.line_numbers[i];
    double hour = csv::to_double(r[0], origin, line, 1);
    if (hour < 0 || hour > 23 || std::floor(hour) != hour)
      throw DataError(origin + ":" + std::to_string(line) +
                      ": column 1: hour must be an integer in [0, 23]");
    int h = static_cast<int>(hour);
    if (seen[h])
      throw DataError(origin + ":" + std::to_string(line) +
                      ": duplicate hour " + std::to_string(h));
    seen[h] = true;
    for (std::size_t c = 1; c < r.size(); ++c) {
      double v = csv::to_double(r[c], origin, line, static_cast<int>(c + 1));
      if (v < 0.0)
        throw DataError(origin + ":" + std::to_string(line) + ": column " +
                        std::to_string(c + 1) + ": negative probability");
      rows[h].push_back(v);
    }
  }
  for (int h = 0; h < 24; ++h)
    if (!seen[h])
      throw DataError(origin + ": missing hour " + std::to_string(h));
  return rows;
}

void write_hist(const std::filesystem::path &path,
                const std::vector<double> &edges,
                const std::vector<std::vector<double>> &rows) {
  csv::Table t;
  t.header.push_back("hour");
  for (double e : edges)
    t.header.push_back(csv::format_exact(e));
  for (std::size_t h = 0; h < rows.size(); ++h) {
    std::vector<std::string> r{std::to_string(h)};
    for (double v : rows[h])
      r.push_back(csv::format_exact(v));
    t.rows.push_back(std::move(r));
  }
  csv::write(path, t);
}

} // namespace

BehaviorModel load_behavior_csv(const std::filesystem::path &dir,
                                 Scenario scenario) {
  BehaviorModel m;
  m.scenario = scenario;
  const auto arrivals = dir / "arrivals.csv";
  auto t = csv::read(arrivals);
  if (t.header.size() != 2)
    throw DataError(arrivals.string() + ": expected hour_of_week,rate");
  std::vector<bool> seen(168, false);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    int line = t.line_numbers[i];
    double how = csv::to_double(t.rows[i][0], arrivals.string(), line, 1);
    if (how < 0 || how > 167 || std::floor(how) != how)
      throw DataError(arrivals.string() + ":" + std::to_string(line) +
                      ": column 1: hour_of_week must be an integer in [0, 167]");
    double rate = csv::to_double(t.rows[i][1], arrivals.string(), line, 2);
    if (rate < 0.0)
      throw DataError(arrivals.string() + ":" + std::to_string(line) +
                      ": column 2: negative rate");
    m.arrival_rate[static_cast<int>(how)] = rate;
    seen[static_cast<int>(how)] = true;
  }
  for (int i = 0; i < 168; ++i)
    if (!seen[i])
      throw DataError(arrivals.string() + ": missing hour_of_week " +
                      std::to_string(i));
  m.stay_prob = read_hist(dir / "stay.csv", m.stay_edges_minutes);
  m.soc_prob = read_hist(dir / "soc.csv", m.soc_edges);
  m.normalize(dir.string());
  return m;
}

void export_behavior_csv(const std::filesystem::path &dir,
                         const BehaviorModel &model) {
  csv::Table t;
  t.header = {"hour_of_week", "rate_per_evse_per_hour"};
  for (int i = 0; i < 168; ++i)
    t.rows.push_back({std::to_string(i), csv::format_exact(model.arrival_rate[i])});
  csv::write(dir / "arrivals.csv", t);
  write_hist(dir / "stay.csv", model.stay_edges_minutes, model.stay_prob);
  write_hist(dir / "soc.csv", model.soc_edges, model.soc_prob);
}

int draw_bin(const std::vector<double> &row, std::mt19937_64 &rng) {
  double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    acc += row[k];
    if (u < acc)
      return static_cast<int>(k);
  }
  // Rounding left u above the cumulative sum: take the last nonzero bin.
  for (std::size_t k = row.size(); k-- > 0;)
    if (row[k] > 0.0)
      return static_cast<int>(k);
  return 0;
}

namespace {

double draw_in_bin(const std::vector<double> &edges,
                   const std::vector<double> &row, std::mt19937_64 &rng) {
  int k = draw_bin(row, rng);
  double lo = k == 0 ? 0.0 : edges[k - 1];
  return lo + (edges[k] - lo) * (1.0 - uniform01(rng));
}

} // namespace

double draw_stay_minutes(const BehaviorModel &m, int hour_of_day,
                         std::mt19937_64 &rng) {
  return draw_in_bin(m.stay_edges_minutes, m.stay_prob.at(hour_of_day), rng);
}

double draw_arrival_soc(const BehaviorModel &m, int hour_of_day,
                        std::mt19937_64 &rng) {
  return draw_in_bin(m.soc_edges, m.soc_prob.at(hour_of_day), rng);
}

std::size_t sample_spec(const std::vector<ev::EvSpec> &registry,
                        std::mt19937_64 &rng) {
  if (registry.empty())
    throw ConfigError("ev.registry", "registry is empty");
  std::vector<double> w;
  for (const auto &s : registry)
    w.push_back(static_cast<double>(s.sales_weight));
  if (!(std::accumulate(w.begin(), w.end(), 0.0) > 0.0))
    throw ConfigError("ev.registry", "total sales weight must be positive");
  std::discrete_distribution<std::size_t> d(w.begin(), w.end());
  return d(rng);
}

TargetRule default_target_rule(double desired_soc) {
  return [desired_soc](const ev::EvSpec &spec, double, int) {
    return desired_soc * spec.max_capacity_kwh;
  };
}

double max_session_power(const ev::EvSpec &spec,
                         const station::ChargerSpec &charger) {
  double amps = std::min(charger.max_charge_current, charger.max_station_current);
  double kw = ev::power_from_current(amps, charger.voltage, charger.phases,
                                     spec.charge_efficiency);
  return std::min(kw, spec.max_charge_kw(charger.type));
}

ArrivalDraw sample_arrivals(const BehaviorModel &model,
                            const std::vector<ev::EvSpec> &registry,
                            const std::vector<FreeSlot> &free_slots,
                            const ArrivalContext &ctx, const TargetRule &rule,
                            std::mt19937_64 &rng, std::mt19937_64 &spec_rng) {
  ArrivalDraw out;
  if (ctx.arrival_step >= ctx.sim_length)
    return out;
  const double dt_hours = ctx.timescale_minutes / 60.0;
  const long long minutes =
      static_cast<long long>(ctx.arrival_step) * ctx.timescale_minutes;
  const int how = hour_of_week_after(ctx.start, minutes);
  const double mean = model.arrival_rate[how] * ctx.total_evse * dt_hours;
  if (!(mean > 0.0))
    return out;
  std::poisson_distribution<int> count(mean);
  int n = count(rng);
  int placed = std::min<int>(n, static_cast<int>(free_slots.size()));
  out.dropped = n - placed;

  std::vector<FreeSlot> pool = free_slots;
  const int hour = how % 24;
  for (int k = 0; k < placed; ++k) {
    std::size_t pick =
        static_cast<std::size_t>(uniform01(rng) * static_cast<double>(pool.size()));
    pick = std::min(pick, pool.size() - 1);
    FreeSlot slot = pool[pick];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));

    double stay = draw_stay_minutes(model, hour, rng);
    double soc = draw_arrival_soc(model, hour, rng);
    const ev::EvSpec &spec = registry[sample_spec(registry, spec_rng)];

    ev::EvSession s;
    s.spec = spec;
    s.arrival_step = ctx.arrival_step;
    s.battery_age_days = ctx.battery_age_days;
    int steps = std::max(1, static_cast<int>(std::lround(stay / ctx.timescale_minutes)));
    s.arrival_energy_kwh = std::clamp(soc * spec.max_capacity_kwh,
                                      spec.min_capacity_kwh,
                                      spec.max_capacity_kwh);
    s.energy_kwh = s.arrival_energy_kwh;
    // Targets stop at the constant-voltage knee, past which energy only
    // approaches the limit asymptotically.
    double ceiling = std::max(s.arrival_energy_kwh,
                              spec.transition_soc * spec.max_capacity_kwh);
    double target = std::clamp(rule(spec, s.arrival_energy_kwh, hour),
                               s.arrival_energy_kwh, ceiling);
    double pmax = max_session_power(spec, *slot.charger);
    if (pmax > 0.0) {
      double need = (target - s.arrival_energy_kwh) / (pmax * dt_hours);
      steps = std::max(steps, static_cast<int>(std::ceil(need - 1e-9)));
    }
    s.departure_step = std::min(ctx.arrival_step + steps, ctx.sim_length);
    double reachable =
        s.arrival_energy_kwh +
        std::max(pmax, 0.0) * dt_hours * (s.departure_step - s.arrival_step);
    s.target_energy_kwh = std::min(target, reachable);
    out.sessions.push_back({slot.slot, std::move(s)});
  }
  return out;
}

} // namespace v2g::behavior
