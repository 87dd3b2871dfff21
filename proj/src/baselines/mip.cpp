// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/baselines/mip.hpp"

#include "v2gsim/baselines/qp_solver.hpp"
#include "v2gsim/common/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <sstream>

namespace v2g::baselines {

std::string to_string(SolveStatus s) {
  switch (s) {
  case SolveStatus::Optimal:
    return "optimal";
  case SolveStatus::Feasible:
    return "feasible";
  case SolveStatus::Relaxed:
    return "relaxed";
  case SolveStatus::Infeasible:
    return "infeasible";
  }
  return "infeasible";
}

std::vector<std::vector<double>>
Solution::slot_currents(const ScheduleProblem &p) const {
  std::vector<std::vector<double>> out(p.slots,
                                       std::vector<double>(p.horizon, 0.0));
  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    for (int t = w.start; t < w.end; ++t)
      out[w.slot][t] = ich[s][t - w.start] + idis[s][t - w.start];
  }
  return out;
}

std::vector<double> Solution::total_power(const ScheduleProblem &p) const {
  std::vector<double> out(p.horizon, 0.0);
  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    for (int t = w.start; t < w.end; ++t)
      out[t] += w.kw_per_amp_ch * ich[s][t - w.start] +
                w.kw_per_amp_dis * idis[s][t - w.start];
  }
  return out;
}

namespace {

// Restriction of one (session, step) pair at a branch-and-bound node.
enum class Mode : unsigned char { Free, NoDis, NoCh, Off, ChOn, DisOn };

bool ch_allowed(Mode m) {
  return m == Mode::Free || m == Mode::NoDis || m == Mode::ChOn;
}
bool dis_allowed(Mode m) {
  return m == Mode::Free || m == Mode::NoCh || m == Mode::DisOn;
}

struct Layout {
  std::vector<int> pair_offset;  // per session
  std::vector<int> ich, idis;    // per pair, -1 if fixed at 0
  std::vector<int> energy;       // per session: first index of E_{start+1}
  std::vector<int> shortfall;    // per session, -1 if no target row
  std::vector<int> v_up, v_lo;   // per (w, t)
  std::vector<int> p_tot;        // tracking only, per t
  int n = 0;
};

struct Model {
  qp::Problem qp;
  Layout lay;
  double constant = 0.0;
};

int pair_count(const ScheduleProblem &p, std::vector<int> &offsets) {
  offsets.clear();
  int n = 0;
  for (const auto &w : p.sessions) {
    offsets.push_back(n);
    n += std::max(0, w.end - w.start);
  }
  return n;
}

bool has_target_row(const ScheduleProblem &p, const SessionWindow &w) {
  return w.target_kwh.has_value() &&
         (p.kind == Problem::Profit || p.enforce_targets);
}

Model build(const ScheduleProblem &p, const std::vector<Mode> &modes,
            const SolveOptions &opt) {
  Model m;
  Layout &L = m.lay;
  const int npairs = pair_count(p, L.pair_offset);
  const int T = p.horizon;
  const int W = static_cast<int>(p.base_kw.size());
  const double dt = p.dt_hours;
  L.ich.assign(npairs, -1);
  L.idis.assign(npairs, -1);

  std::vector<double> lo, up, c;
  auto add_var = [&](double l, double u, double cost) {
    lo.push_back(l);
    up.push_back(u);
    c.push_back(cost);
    return L.n++;
  };

  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    for (int t = w.start; t < w.end; ++t) {
      const int q = L.pair_offset[s] + t - w.start;
      const Mode md = modes[q];
      if (w.can_charge() && ch_allowed(md)) {
        double l = md == Mode::ChOn ? w.ich_min : 0.0;
        double cost = p.kind == Problem::Profit
                          ? w.kw_per_amp_ch * p.charge_price[t] * dt
                          : 0.0;
        L.ich[q] = add_var(l, w.ich_max, cost);
      }
      if (w.can_discharge() && dis_allowed(md)) {
        double u = md == Mode::DisOn ? w.idis_min : 0.0;
        double cost = p.kind == Problem::Profit
                          ? w.kw_per_amp_dis * p.discharge_price[t] * dt
                          : 0.0;
        L.idis[q] = add_var(w.idis_max, u, cost);
      }
    }
  }
  L.energy.assign(p.sessions.size(), -1);
  L.shortfall.assign(p.sessions.size(), -1);
  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    L.energy[s] = L.n;
    for (int t = w.start; t < w.end; ++t)
      add_var(w.energy_min_kwh, w.energy_max_kwh, 0.0);
    if (has_target_row(p, w) && w.end > w.start)
      L.shortfall[s] = add_var(0.0, qp::kInf, opt.target_penalty);
  }
  L.v_up.assign(W * T, -1);
  L.v_lo.assign(W * T, -1);
  for (int w = 0; w < W; ++w)
    for (int t = 0; t < T; ++t) {
      L.v_up[w * T + t] = add_var(0.0, qp::kInf, opt.transformer_penalty);
      L.v_lo[w * T + t] = add_var(0.0, qp::kInf, opt.transformer_penalty);
    }
  if (p.kind == Problem::Pst) {
    for (int t = 0; t < T; ++t) {
      L.p_tot.push_back(add_var(-qp::kInf, qp::kInf, -2.0 * p.setpoint[t]));
      m.constant += p.setpoint[t] * p.setpoint[t];
    }
  }

  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> a, g;
  std::vector<double> b, h;
  // Battery dynamics: E_{t+1} - E_t - dt*(k_ch I_ch + k_dis I_dis) = 0.
  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    for (int t = w.start; t < w.end; ++t) {
      const int q = L.pair_offset[s] + t - w.start;
      const int row = static_cast<int>(b.size());
      const int e_next = L.energy[s] + (t - w.start);
      a.emplace_back(row, e_next, 1.0);
      double rhs = 0.0;
      if (t == w.start)
        rhs = w.energy_init_kwh;
      else
        a.emplace_back(row, e_next - 1, -1.0);
      if (L.ich[q] >= 0)
        a.emplace_back(row, L.ich[q], -dt * w.kw_per_amp_ch);
      if (L.idis[q] >= 0)
        a.emplace_back(row, L.idis[q], -dt * w.kw_per_amp_dis);
      b.push_back(rhs);
      // Relaxed exclusivity.
      if (L.ich[q] >= 0 && L.idis[q] >= 0) {
        const int gr = static_cast<int>(h.size());
        g.emplace_back(gr, L.ich[q], 1.0 / w.ich_max);
        g.emplace_back(gr, L.idis[q], 1.0 / w.idis_max);
        h.push_back(1.0);
      }
    }
    if (L.shortfall[s] >= 0) {
      const int gr = static_cast<int>(h.size());
      g.emplace_back(gr, L.energy[s] + (w.end - w.start) - 1, -1.0);
      g.emplace_back(gr, L.shortfall[s], -1.0);
      h.push_back(-*w.target_kwh);
    }
  }
  // Station current bounds per charger and step.
  const int C = static_cast<int>(p.chargers.size());
  std::vector<std::vector<std::pair<int, double>>> st(C * T), tr(W * T);
  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    const int wt = p.charger_transformer[w.charger];
    for (int t = w.start; t < w.end; ++t) {
      const int q = L.pair_offset[s] + t - w.start;
      if (L.ich[q] >= 0) {
        st[w.charger * T + t].push_back({L.ich[q], 1.0});
        tr[wt * T + t].push_back({L.ich[q], w.kw_per_amp_ch});
      }
      if (L.idis[q] >= 0) {
        st[w.charger * T + t].push_back({L.idis[q], 1.0});
        tr[wt * T + t].push_back({L.idis[q], w.kw_per_amp_dis});
      }
    }
  }
  for (int ch = 0; ch < C; ++ch)
    for (int t = 0; t < T; ++t) {
      const auto &terms = st[ch * T + t];
      if (terms.empty())
        continue;
      bool any_pos = false, any_neg = false;
      for (auto [v, coef] : terms) {
        (void)coef;
        (up[v] > 0.0 ? any_pos : any_neg) = true;
        if (lo[v] < 0.0)
          any_neg = true;
      }
      if (any_pos) {
        const int gr = static_cast<int>(h.size());
        for (auto [v, coef] : terms)
          g.emplace_back(gr, v, coef);
        h.push_back(p.chargers[ch].max_station_current);
      }
      if (any_neg) {
        const int gr = static_cast<int>(h.size());
        for (auto [v, coef] : terms)
          g.emplace_back(gr, v, -coef);
        h.push_back(-p.chargers[ch].min_station_current);
      }
    }
  // Transformer limits, elastic.
  for (int w = 0; w < W; ++w)
    for (int t = 0; t < T; ++t) {
      const auto &terms = tr[w * T + t];
      int gr = static_cast<int>(h.size());
      for (auto [v, coef] : terms)
        g.emplace_back(gr, v, coef);
      g.emplace_back(gr, L.v_up[w * T + t], -1.0);
      h.push_back(p.upper_kw[w][t] - p.base_kw[w][t]);
      gr = static_cast<int>(h.size());
      for (auto [v, coef] : terms)
        g.emplace_back(gr, v, -coef);
      g.emplace_back(gr, L.v_lo[w * T + t], -1.0);
      h.push_back(p.base_kw[w][t] - p.lower_kw[w][t]);
    }
  // Tracking: p_t - sum of EV power = 0.
  std::vector<Trip> qt;
  if (p.kind == Problem::Pst) {
    std::vector<std::vector<std::pair<int, double>>> pw(T);
    for (int w = 0; w < W; ++w)
      for (int t = 0; t < T; ++t)
        for (auto term : tr[w * T + t])
          pw[t].push_back(term);
    for (int t = 0; t < T; ++t) {
      const int row = static_cast<int>(b.size());
      a.emplace_back(row, L.p_tot[t], 1.0);
      for (auto [v, coef] : pw[t])
        a.emplace_back(row, v, -coef);
      b.push_back(0.0);
      qt.emplace_back(L.p_tot[t], L.p_tot[t], 2.0);
    }
  }

  auto &P = m.qp;
  const int n = L.n;
  P.Q.resize(n, n);
  P.Q.setFromTriplets(qt.begin(), qt.end());
  P.c = Eigen::Map<qp::Vec>(c.data(), n);
  P.lower = Eigen::Map<qp::Vec>(lo.data(), n);
  P.upper = Eigen::Map<qp::Vec>(up.data(), n);
  P.A.resize(static_cast<Eigen::Index>(b.size()), n);
  P.A.setFromTriplets(a.begin(), a.end());
  P.b = Eigen::Map<qp::Vec>(b.data(), static_cast<Eigen::Index>(b.size()));
  P.G.resize(static_cast<Eigen::Index>(h.size()), n);
  P.G.setFromTriplets(g.begin(), g.end());
  P.h = Eigen::Map<qp::Vec>(h.data(), static_cast<Eigen::Index>(h.size()));
  return m;
}

struct NodeResult {
  bool ok = false;
  double value = 0.0; // internal objective including penalties
  std::vector<double> ich, idis; // per pair
  qp::Vec x;
};

NodeResult solve_node(const ScheduleProblem &p, const std::vector<Mode> &modes,
                      const SolveOptions &opt, Model *keep = nullptr) {
  Model m = build(p, modes, opt);
  auto r = qp::solve(m.qp);
  NodeResult out;
  if (r.status != qp::Status::Optimal && r.status != qp::Status::Inaccurate)
    return out;
  out.ok = true;
  out.value = r.objective + m.constant;
  const auto npairs = m.lay.ich.size();
  out.ich.assign(npairs, 0.0);
  out.idis.assign(npairs, 0.0);
  for (std::size_t q = 0; q < npairs; ++q) {
    if (m.lay.ich[q] >= 0)
      out.ich[q] = r.x[m.lay.ich[q]];
    if (m.lay.idis[q] >= 0)
      out.idis[q] = r.x[m.lay.idis[q]];
  }
  // Simultaneous charge and discharge at equal efficiency and a discharge
  // price no higher than the charge price is never better than the net
  // current, so the relaxation's optimum can be netted in place.
  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    if (w.kw_per_amp_ch != w.kw_per_amp_dis)
      continue;
    for (int t = w.start; t < w.end; ++t) {
      const auto q = static_cast<std::size_t>(m.lay.pair_offset[s] + t - w.start);
      if (out.ich[q] <= 0.0 || out.idis[q] >= 0.0)
        continue;
      if (p.kind == Problem::Profit && p.discharge_price[t] > p.charge_price[t])
        continue;
      const double net = out.ich[q] + out.idis[q];
      out.ich[q] = std::max(net, 0.0);
      out.idis[q] = std::min(net, 0.0);
    }
  }
  out.x = r.x;
  if (keep)
    *keep = std::move(m);
  return out;
}

struct Branch {
  int pair = -1;
  Mode left = Mode::Free, right = Mode::Free;
};

Branch pick_branch(const ScheduleProblem &p, const std::vector<int> &offsets,
                   const std::vector<Mode> &modes, const NodeResult &r,
                   double tol) {
  Branch best;
  double best_score = 0.0;
  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    for (int t = w.start; t < w.end; ++t) {
      const int q = offsets[s] + t - w.start;
      const double a = r.ich[q], b = r.idis[q];
      const Mode md = modes[q];
      double score = 0.0;
      Branch br{q};
      if (a > tol && b < -tol) {
        score = std::min(a / w.ich_max, b / w.idis_max);
        br.left = Mode::NoDis;
        br.right = Mode::NoCh;
      } else if (md != Mode::ChOn && a > tol && a < w.ich_min - tol) {
        score = std::min(a, w.ich_min - a) / w.ich_max;
        br.left = md == Mode::NoDis ? Mode::Off : Mode::NoCh;
        br.right = Mode::ChOn;
      } else if (md != Mode::DisOn && b < -tol && b > w.idis_min + tol) {
        score = std::min(-b, b - w.idis_min) / -w.idis_max;
        br.left = md == Mode::NoCh ? Mode::Off : Mode::NoDis;
        br.right = Mode::DisOn;
      }
      if (score > best_score) {
        best_score = score;
        best = br;
      }
    }
  }
  return best;
}

// Collapses simultaneous charge/discharge into the net current and rounds
// dead-band currents to the nearer side.
std::vector<Mode> merge_modes(const ScheduleProblem &p,
                              const std::vector<int> &offsets,
                              const std::vector<Mode> &modes,
                              const NodeResult &r, double tol) {
  std::vector<Mode> out = modes;
  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    for (int t = w.start; t < w.end; ++t) {
      const int q = offsets[s] + t - w.start;
      const double net = r.ich[q] + r.idis[q];
      Mode md;
      if (net > tol && w.can_charge()) {
        if (w.ich_min > 0.0)
          md = net >= 0.5 * w.ich_min ? Mode::ChOn : Mode::Off;
        else
          md = Mode::NoDis;
      } else if (net < -tol && w.can_discharge()) {
        if (w.idis_min < 0.0)
          md = net <= 0.5 * w.idis_min ? Mode::DisOn : Mode::Off;
        else
          md = Mode::NoCh;
      } else {
        md = (w.ich_min > 0.0 || !w.can_charge()) ? Mode::Off : Mode::NoDis;
      }
      out[q] = md;
    }
  }
  return out;
}

struct QueueItem {
  double bound;
  int id;
  std::vector<Mode> modes;
  bool operator<(const QueueItem &o) const {
    if (bound != o.bound)
      return bound > o.bound; // min-heap on bound
    return id > o.id;
  }
};

} // namespace

Solution solve(const ScheduleProblem &p, const SolveOptions &opt) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<int> offsets;
  const int npairs = pair_count(p, offsets);
  const double tol = opt.integrality_tol;

  std::vector<Mode> root(npairs, Mode::Free);
  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    for (int t = w.start; t < w.end; ++t) {
      Mode &md = root[offsets[s] + t - w.start];
      if (!w.can_discharge())
        md = w.can_charge() ? Mode::NoDis : Mode::Off;
      else if (!w.can_charge())
        md = Mode::NoCh;
    }
  }

  double incumbent = qp::kInf;
  std::vector<Mode> best_modes;
  auto try_incumbent = [&](const std::vector<Mode> &modes) {
    auto r = solve_node(p, modes, opt);
    if (!r.ok)
      return;
    if (pick_branch(p, offsets, modes, r, tol).pair >= 0)
      return;
    if (r.value < incumbent) {
      incumbent = r.value;
      best_modes = modes;
    }
  };

  std::priority_queue<QueueItem> open;
  open.push({-qp::kInf, 0, root});
  int ids = 1;
  int nodes = 0;
  double best_open_bound = -qp::kInf;
  bool limit_hit = false;
  while (!open.empty()) {
    QueueItem item = open.top();
    const double gap_tol = opt.relative_gap * (1.0 + std::abs(incumbent));
    if (item.bound >= incumbent - gap_tol) {
      open = {};
      break;
    }
    if (nodes >= opt.max_nodes) {
      limit_hit = true;
      best_open_bound = item.bound;
      break;
    }
    open.pop();
    ++nodes;
    auto r = solve_node(p, item.modes, opt);
    if (!r.ok || r.value >= incumbent - gap_tol)
      continue;
    Branch br = pick_branch(p, offsets, item.modes, r, tol);
    if (br.pair < 0) {
      incumbent = r.value;
      best_modes = item.modes;
      continue;
    }
    if (nodes == 1 || nodes % opt.heuristic_every == 0)
      try_incumbent(merge_modes(p, offsets, item.modes, r, tol));
    for (Mode child : {br.left, br.right}) {
      auto modes = item.modes;
      modes[br.pair] = child;
      open.push({r.value, ids++, std::move(modes)});
    }
  }
  if (!(incumbent < qp::kInf))
    throw SolverError("no integer-feasible schedule found within the node limit");

  Model m;
  auto r = solve_node(p, best_modes, opt, &m);
  Solution sol;
  sol.nodes = nodes;
  sol.bound_gap =
      limit_hit ? (incumbent - best_open_bound) / (1.0 + std::abs(incumbent))
                : 0.0;
  const auto &L = m.lay;
  std::ostringstream report;
  sol.ich.resize(p.sessions.size());
  sol.idis.resize(p.sessions.size());
  sol.energy.resize(p.sessions.size());
  sol.shortfall_kwh.assign(p.sessions.size(), 0.0);
  for (std::size_t s = 0; s < p.sessions.size(); ++s) {
    const auto &w = p.sessions[s];
    sol.energy[s].push_back(w.energy_init_kwh);
    for (int t = w.start; t < w.end; ++t) {
      const int q = offsets[s] + t - w.start;
      double a = r.ich[q], b = r.idis[q];
      // Interior-point iterates sit strictly inside their bounds.
      for (double edge : {0.0, w.ich_min, w.ich_max})
        if (std::abs(a - edge) < tol)
          a = edge;
      for (double edge : {0.0, w.idis_min, w.idis_max})
        if (std::abs(b - edge) < tol)
          b = edge;
      sol.ich[s].push_back(std::clamp(a, 0.0, w.ich_max));
      sol.idis[s].push_back(std::clamp(b, w.idis_max, 0.0));
      sol.energy[s].push_back(r.x[L.energy[s] + t - w.start]);
    }
    if (L.shortfall[s] >= 0) {
      double sf = std::max(0.0, r.x[L.shortfall[s]]);
      sol.shortfall_kwh[s] = sf > tol ? sf : 0.0;
      if (sf > tol)
        report << "session " << w.session_id << ": departure target short by "
               << sf << " kWh\n";
    }
  }
  const int W = static_cast<int>(p.base_kw.size());
  bool excess = false;
  sol.transformer_excess_kw.assign(W, std::vector<double>(p.horizon, 0.0));
  for (int w = 0; w < W; ++w)
    for (int t = 0; t < p.horizon; ++t) {
      double v = std::max(r.x[L.v_up[w * p.horizon + t]],
                          r.x[L.v_lo[w * p.horizon + t]]);
      if (v > 1e-6) {
        excess = true;
        sol.transformer_excess_kw[w][t] = v;
        report << "transformer " << w << " step " << t << ": limit exceeded by "
               << v << " kW\n";
      }
    }
  sol.report = report.str();

  // Objective from the cleaned currents.
  auto power = sol.total_power(p);
  sol.objective = 0.0;
  if (p.kind == Problem::Pst) {
    for (int t = 0; t < p.horizon; ++t) {
      const double e = p.setpoint[t] - power[t];
      sol.objective += e * e;
    }
  } else {
    for (std::size_t s = 0; s < p.sessions.size(); ++s) {
      const auto &w = p.sessions[s];
      for (int t = w.start; t < w.end; ++t) {
        const int k = t - w.start;
        sol.objective -= (w.kw_per_amp_ch * sol.ich[s][k] * p.charge_price[t] +
                          w.kw_per_amp_dis * sol.idis[s][k] *
                              p.discharge_price[t]) *
                         p.dt_hours;
      }
    }
  }
  double internal = p.kind == Problem::Pst ? sol.objective : -sol.objective;
  sol.penalty = std::max(0.0, r.value - internal);

  bool short_any = std::any_of(sol.shortfall_kwh.begin(), sol.shortfall_kwh.end(),
                               [](double v) { return v > 0.0; });
  if (excess)
    sol.status = SolveStatus::Infeasible;
  else if (short_any)
    sol.status = SolveStatus::Relaxed;
  else
    sol.status = limit_hit ? SolveStatus::Feasible : SolveStatus::Optimal;
  sol.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

Solution solve_pst(ScheduleProblem p, const SolveOptions &opt) {
  p.kind = Problem::Pst;
  return solve(p, opt);
}

Solution solve_profit(ScheduleProblem p, const SolveOptions &opt) {
  p.kind = Problem::Profit;
  return solve(p, opt);
}

} // namespace v2g::baselines
