// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/baselines/audit.hpp"

#include <algorithm>
#include <cmath>

namespace v2g::baselines {

AuditReport audit(const ScheduleProblem &p, const Solution &s, double tol) {
  AuditReport rep;
  auto note = [&](const char *what, int sess, int step, double r) {
    if (!(r > 0.0) && !std::isnan(r))
      return;
    if (std::isnan(r))
      r = INFINITY;
    rep.max_residual = std::max(rep.max_residual, r);
    if (r > tol)
      rep.violations.push_back({what, sess, step, r});
  };

  const int T = p.horizon;
  const int C = static_cast<int>(p.chargers.size());
  const int W = static_cast<int>(p.base_kw.size());
  if (s.ich.size() != p.sessions.size() || s.idis.size() != p.sessions.size()) {
    note("shape", -1, -1, INFINITY);
    return rep;
  }
  std::vector<double> station_amps(C * T, 0.0);
  std::vector<double> ev_kw(W * T, 0.0);
  std::vector<int> occupied(p.slots * T, 0);

  for (std::size_t k = 0; k < p.sessions.size(); ++k) {
    const auto &w = p.sessions[k];
    const int sk = static_cast<int>(k);
    const int len = w.end - w.start;
    if (static_cast<int>(s.ich[k].size()) != len ||
        static_cast<int>(s.idis[k].size()) != len) {
      note("shape", sk, -1, INFINITY);
      continue;
    }
    double e = w.energy_init_kwh;
    for (int i = 0; i < len; ++i) {
      const int t = w.start + i;
      const double ic = s.ich[k][i];
      const double id = s.idis[k][i];
      if (occupied[w.slot * T + t]++)
        note("slot occupied twice", sk, t, INFINITY);
      // Charge current: 0 or within [min, max].
      if (ic != 0.0) {
        note("charge current sign", sk, t, -ic);
        note("charge current max", sk, t, ic - w.ich_max);
        if (ic > 0.0)
          note("charge dead-band", sk, t, std::min(ic, w.ich_min - ic));
      }
      if (id != 0.0) {
        note("discharge current sign", sk, t, id);
        note("discharge current max", sk, t, w.idis_max - id);
        if (id < 0.0)
          note("discharge dead-band", sk, t, std::min(-id, id - w.idis_min));
      }
      if (ic > 0.0 && id < 0.0)
        note("exclusivity", sk, t, std::min(ic, -id));
      const double kw = w.kw_per_amp_ch * ic + w.kw_per_amp_dis * id;
      e += kw * p.dt_hours;
      if (i + 1 < static_cast<int>(s.energy.at(k).size()))
        note("battery dynamics", sk, t, std::abs(s.energy[k][i + 1] - e));
      note("capacity max", sk, t, e - w.energy_max_kwh);
      note("capacity min", sk, t, w.energy_min_kwh - e);
      station_amps[w.charger * T + t] += ic + id;
      ev_kw[p.charger_transformer[w.charger] * T + t] += kw;
    }
    if (w.target_kwh && (p.kind == Problem::Profit || p.enforce_targets))
      rep.max_target_shortfall =
          std::max(rep.max_target_shortfall, *w.target_kwh - e);
  }
  for (int c = 0; c < C; ++c)
    for (int t = 0; t < T; ++t) {
      const double a = station_amps[c * T + t];
      note("station max current", -1, t, a - p.chargers[c].max_station_current);
      note("station min current", -1, t, p.chargers[c].min_station_current - a);
    }
  for (int w = 0; w < W; ++w)
    for (int t = 0; t < T; ++t) {
      const double net = p.base_kw[w][t] + ev_kw[w * T + t];
      note("transformer max", -1, t, net - p.upper_kw[w][t]);
      note("transformer min", -1, t, p.lower_kw[w][t] - net);
    }
  return rep;
}

} // namespace v2g::baselines
