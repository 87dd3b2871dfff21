// SPDX-License-Identifier: Apache-2.0
#include "checks.hpp"

#include "support.hpp"

#include "v2gsim/baselines/audit.hpp"
#include "v2gsim/baselines/brute_force.hpp"
#include "v2gsim/baselines/mip.hpp"
#include "v2gsim/common/calendar.hpp"
#include "v2gsim/ev/registry.hpp"
#include "v2gsim/metrics/metrics.hpp"
#include "v2gsim/station/station.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>
#include <sstream>

namespace v2g::testing {

namespace {

template <class T> bool same_bits(const std::vector<T> &a, const std::vector<T> &b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0);
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_departure(const DepartureRecord &a, const DepartureRecord &b) {
  return a.session_id == b.session_id && a.slot == b.slot &&
         a.arrival_step == b.arrival_step &&
         a.departure_step == b.departure_step &&
         same_bits(a.capacity_kwh, b.capacity_kwh) &&
         same_bits(a.arrival_energy_kwh, b.arrival_energy_kwh) &&
         same_bits(a.energy_kwh, b.energy_kwh) &&
         same_bits(a.target_energy_kwh, b.target_energy_kwh) &&
         same_bits(a.degradation.calendar, b.degradation.calendar) &&
         same_bits(a.degradation.cyclic, b.degradation.cyclic);
}

bool same_step(const StepRecord &a, const StepRecord &b) {
  if (a.departures.size() != b.departures.size())
    return false;
  for (std::size_t i = 0; i < a.departures.size(); ++i)
    if (!same_departure(a.departures[i], b.departures[i]))
      return false;
  return a.t == b.t && same_bits(a.actions, b.actions) &&
         same_bits(a.requested_amps, b.requested_amps) &&
         same_bits(a.amps, b.amps) && same_bits(a.power_kw, b.power_kw) &&
         same_bits(a.flags, b.flags) && same_bits(a.session_ids, b.session_ids) &&
         same_bits(a.charger_amps, b.charger_amps) &&
         same_bits(a.transformer_kw, b.transformer_kw) &&
         same_bits(a.overload_kw, b.overload_kw) &&
         same_bits(a.lower_violation_kw, b.lower_violation_kw) &&
         same_bits(a.total_ev_kw, b.total_ev_kw) &&
         same_bits(a.setpoint_kw, b.setpoint_kw) &&
         same_bits(a.charge_price, b.charge_price) &&
         same_bits(a.discharge_price, b.discharge_price) &&
         same_bits(a.cashflow, b.cashflow) && same_bits(a.reward, b.reward) &&
         a.dropped_arrivals == b.dropped_arrivals;
}

int bin_of(const std::vector<double> &edges, double v) {
  auto it = std::lower_bound(edges.begin(), edges.end(), v);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - edges.begin(),
                                                   edges.size() - 1));
}

// Pooled Pearson statistic over hour rows. Cells expecting fewer than five
// counts are merged so the asymptotic distribution applies.
double pooled_p(const std::vector<std::vector<double>> &prob,
                const std::vector<std::vector<long long>> &count) {
  double chi2 = 0.0;
  int df = 0;
  for (std::size_t h = 0; h < prob.size(); ++h) {
    const long long n = std::accumulate(count[h].begin(), count[h].end(), 0LL);
    if (n == 0)
      continue;
    std::vector<double> e;
    std::vector<double> o;
    double rest_e = 0.0, rest_o = 0.0;
    for (std::size_t k = 0; k < prob[h].size(); ++k) {
      double ek = prob[h][k] * static_cast<double>(n);
      if (ek < 5.0) {
        rest_e += ek;
        rest_o += static_cast<double>(count[h][k]);
      } else {
        e.push_back(ek);
        o.push_back(static_cast<double>(count[h][k]));
      }
    }
    if (rest_e > 0.0 || rest_o > 0.0) {
      if (rest_e < 5.0 && !e.empty()) {
        auto it = std::min_element(e.begin(), e.end());
        auto i = it - e.begin();
        e[i] += rest_e;
        o[i] += rest_o;
      } else {
        e.push_back(rest_e);
        o.push_back(rest_o);
      }
    }
    for (std::size_t k = 0; k < e.size(); ++k)
      chi2 += (o[k] - e[k]) * (o[k] - e[k]) / e[k];
    df += static_cast<int>(e.size()) - 1;
  }
  if (df <= 0)
    return 1.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

StepRecord step(int t, std::vector<double> power, double setpoint, double c_ch,
                double c_dis, double overload) {
  StepRecord r;
  r.t = t;
  r.power_kw = power;
  r.session_ids = {0, 1};
  r.setpoint_kw = setpoint;
  r.charge_price = c_ch;
  r.discharge_price = c_dis;
  r.overload_kw = {overload};
  r.lower_violation_kw = {0.0};
  for (double p : power) {
    r.total_ev_kw += p;
    r.cashflow += station::session_cashflow(p, 0.25, c_ch, c_dis);
  }
  return r;
}

DepartureRecord departure(int id, double energy, double target,
                          std::vector<double> soc, std::vector<double> power,
                          double age_days) {
  ev::EvSession s;
  s.energy_kwh = energy;
  s.target_energy_kwh = target;
  s.soc_history = std::move(soc);
  s.power_history = std::move(power);
  s.battery_age_days = age_days;
  DepartureRecord d;
  d.session_id = id;
  d.slot = id;
  d.departure_step = 3;
  d.capacity_kwh = 80.0;
  d.energy_kwh = energy;
  d.target_energy_kwh = target;
  d.degradation = ev::total_degradation(s, 0.25, ev::DegradationParams{});
  return d;
}

} // namespace

SimTrace hand_built_trace() {
  SimTrace tr;
  tr.dt_hours = 0.25;
  tr.has_setpoint = true;
  tr.steps.push_back(step(0, {7.0, -3.0}, 5.0, 0.20, 0.25, 0.0));
  tr.steps.push_back(step(1, {11.0, 0.0}, 8.0, 0.30, 0.30, 1.5));
  tr.steps.push_back(step(2, {0.0, -5.0}, 2.0, 0.10, 0.12, 0.0));
  tr.steps[2].departures.push_back(
      departure(0, 30.0, 32.0, {0.4, 0.435, 0.49}, {7.0, 11.0, 0.0}, 730.0));
  tr.steps[2].departures.push_back(
      departure(1, 40.0, 35.0, {0.7, 0.6875, 0.6875}, {-3.0, 0.0, -5.0}, 365.0));
  return tr;
}

double hand_built_error() {
  const auto m = metrics::compute_metrics(hand_built_trace());
  // independently computed from the same inputs
  const double expected[] = {4.5, 2.0, 0.96875, -0.8375, 0.375, 2.75, 59.0,
                             2.9654936852148746e-05};
  const double got[] = {m.energy_charged_kwh, m.energy_discharged_kwh,
                        m.user_satisfaction.value_or(NAN), m.profits_eur,
                        m.overload_kwh, m.tracking_abs_kwh.value_or(NAN),
                        m.tracking_sq.value_or(NAN), m.capacity_loss};
  double worst = 0.0;
  for (int i = 0; i < 8; ++i) {
    double d = std::abs(got[i] - expected[i]);
    worst = std::isnan(d) ? INFINITY : std::max(worst, d);
  }
  return worst;
}

bool same_trace(const SimTrace &a, const SimTrace &b) {
  if (!same_bits(a.dt_hours, b.dt_hours) || a.has_setpoint != b.has_setpoint ||
      a.steps.size() != b.steps.size())
    return false;
  for (std::size_t t = 0; t < a.steps.size(); ++t)
    if (!same_step(a.steps[t], b.steps[t]))
      return false;
  return true;
}

BehaviorStats behavior_stats(behavior::Scenario s, long long n, int weeks,
                             std::uint64_t seed) {
  const auto model = behavior::default_behavior(s);
  BehaviorStats out;
  out.sessions = n;
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> how(model.arrival_rate.begin(),
                                      model.arrival_rate.end());
  std::vector<std::vector<long long>> stay(
      24, std::vector<long long>(model.stay_edges_minutes.size(), 0));
  std::vector<std::vector<long long>> soc(
      24, std::vector<long long>(model.soc_edges.size(), 0));
  for (long long i = 0; i < n; ++i) {
    int hour = how(rng) % 24;
    ++stay[hour][bin_of(model.stay_edges_minutes,
                        behavior::draw_stay_minutes(model, hour, rng))];
    ++soc[hour][bin_of(model.soc_edges,
                       behavior::draw_arrival_soc(model, hour, rng))];
  }
  out.stay_p = pooled_p(model.stay_prob, stay);
  out.soc_p = pooled_p(model.soc_prob, soc);

  // Arrival process over whole weeks starting Monday 00:00.
  const auto registry = ev::default_registry();
  station::ChargerSpec cs;
  std::vector<behavior::FreeSlot> slots;
  for (int k = 0; k < 50; ++k)
    slots.push_back({k, &cs});
  behavior::ArrivalContext ctx;
  ctx.start.hour = 0;
  ctx.total_evse = 50;
  ctx.sim_length = weeks * 672 + 1;
  auto rule = behavior::default_target_rule(1.0);
  std::mt19937_64 spec_rng(seed + 1);
  for (int step = 0; step < weeks * 672; ++step) {
    ctx.arrival_step = step;
    auto d = behavior::sample_arrivals(model, registry, slots, ctx, rule, rng,
                                       spec_rng);
    const long long count = static_cast<long long>(d.sessions.size()) + d.dropped;
    out.simulated_arrivals += count;
    int hour = hour_of_week_after(ctx.start, step * 15LL) % 24;
    if (hour >= 19 || hour < 5)
      out.night_arrivals += count;
  }
  return out;
}

double spec_frequency_z(long long n, std::uint64_t seed) {
  const auto registry = ev::default_registry();
  std::mt19937_64 rng(seed);
  std::vector<long long> count(registry.size(), 0);
  for (long long i = 0; i < n; ++i)
    ++count[behavior::sample_spec(registry, rng)];
  double total = 0.0;
  for (const auto &s : registry)
    total += static_cast<double>(s.sales_weight);
  double worst = 0.0;
  for (std::size_t i = 0; i < registry.size(); ++i) {
    double p = static_cast<double>(registry[i].sales_weight) / total;
    double mean = p * static_cast<double>(n);
    double sigma = std::sqrt(mean * (1.0 - p));
    worst = std::max(worst, std::abs(static_cast<double>(count[i]) - mean) / sigma);
  }
  return worst;
}

OracleStats pst_oracle(int instances, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  OracleStats out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<double> levels{0.0, 8.0, 16.0, 24.0, 32.0};
  std::ostringstream log;
  for (int i = 0; i < instances; ++i) {
    SimConfig cfg = single_evse_config(Problem::Pst, 5);
    cfg.chargers[0].min_charge_current = u(rng) < 0.5 ? 0.0 : 8.0;
    const double cap = 40.0 + 40.0 * u(rng);
    const double e0 = cap * (0.2 + 0.4 * u(rng));
    std::vector<double> setpoint(5);
    for (double &p : setpoint)
      p = 25.0 * u(rng);
    Replay r = make_replay(cfg, {session_at(0, linear_spec(cap, false), 1, 5, e0, e0)},
                           setpoint);

    auto problem = baselines::problem_from_replay(r, Problem::Pst);
    baselines::Solution sol;
    try {
      sol = baselines::solve_pst(problem);
    } catch (const std::exception &e) {
      ++out.instances;
      ++out.failures;
      log << "instance " << i << ": " << e.what() << "; ";
      continue;
    }
    auto report = baselines::audit(problem, sol);
    out.max_audit = std::max(out.max_audit, report.max_residual);
    auto oracle = baselines::brute_force_oracle(r, levels, true);

    const double best_plan =
        *std::min_element(oracle.all_objectives.begin(), oracle.all_objectives.end());
    // grid half-spacing in kW for one EV
    const double delta = 0.5 * 8.0 * cfg.chargers[0].kw_per_amp();
    const auto power = sol.total_power(problem);
    double bound = 0.0;
    for (int t = 0; t < 5; ++t) {
      double e = setpoint[t] - power[t];
      bound += 2.0 * std::abs(e) * delta + delta * delta;
    }
    // interior-point optimality is relative: 1e-9 of the objective scale
    double lower = sol.objective - best_plan - 1e-9 * (1.0 + std::abs(best_plan));
    double upper = oracle.objective - sol.objective - bound; // must be <= 0
    double margin = std::max(lower, upper);
    out.worst_margin = std::max(out.worst_margin, margin);
    ++out.instances;
    if (margin > 0.0 || !report.ok()) {
      ++out.failures;
      log << "instance " << i << ": solver " << sol.objective << ", best plan "
          << best_plan << ", bound " << bound << "; ";
    }
  }
  out.seconds = std::chrono::duration<double>(clock::now() - t0).count();
  out.detail = log.str();
  return out;
}

OracleStats profit_oracle(int instances, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  OracleStats out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<double> levels{-32.0, -16.0, 0.0, 16.0, 32.0};
  std::ostringstream log;
  for (int i = 0; i < instances; ++i) {
    SimConfig cfg = single_evse_config(Problem::Profit, 5, true);
    const double cap = 60.0;
    const double e0 = cap * (0.4 + 0.2 * u(rng));
    const int m = static_cast<int>(u(rng) * 5.0);
    const double step_kwh = 16.0 * cfg.chargers[0].kw_per_amp() * cfg.dt_hours();
    const double target = e0 + m * step_kwh;
    std::vector<double> price(5);
    for (double &p : price)
      p = 0.25 + 0.1 * u(rng);
    const int valley = 1 + static_cast<int>(u(rng) * 3.0);
    price[valley] = 0.05 + 0.05 * u(rng);
    price[valley + 1] = 0.05 + 0.05 * u(rng);
    Replay r = make_replay(cfg, {session_at(0, linear_spec(cap, true), 1, 5, e0, target)},
                           {}, price);

    auto problem = baselines::problem_from_replay(r, Problem::Profit);
    baselines::Solution sol;
    try {
      sol = baselines::solve_profit(problem);
    } catch (const std::exception &e) {
      ++out.instances;
      ++out.failures;
      log << "instance " << i << ": " << e.what() << "; ";
      continue;
    }
    auto report = baselines::audit(problem, sol);
    out.max_audit = std::max(out.max_audit, report.max_residual);
    auto oracle = baselines::brute_force_oracle(r, levels);
    double gap = oracle.found ? std::abs(sol.objective - oracle.objective) : 1e9;
    out.worst_margin = std::max(out.worst_margin, gap);
    ++out.instances;
    if (gap > 1e-6 || !report.ok() || sol.status != baselines::SolveStatus::Optimal) {
      ++out.failures;
      log << "instance " << i << ": solver " << sol.objective << " ("
          << baselines::to_string(sol.status) << "), oracle " << oracle.objective
          << "; ";
    }
  }
  out.seconds = std::chrono::duration<double>(clock::now() - t0).count();
  out.detail = log.str();
  return out;
}

} // namespace v2g::testing
