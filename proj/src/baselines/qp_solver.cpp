// SPDX-License-Identifier: Apache-2.0
#include "v2gsim/baselines/qp_solver.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

namespace v2g::qp {

namespace {

// Largest alpha in (0, 1] keeping v + alpha*dv >= 0.
double max_step(const Vec &v, const Vec &dv) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0)
      a = std::min(a, -v[i] / dv[i]);
  return a;
}

double inf_norm(const Vec &v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

} // namespace

Result solve(const Problem &p, const Options &opt) {
  const Eigen::Index n = p.c.size();
  const Eigen::Index me = p.b.size();
  const Eigen::Index mi = p.h.size();
  if (n == 0) {
    Result r;
    bool feasible = (me == 0 || p.b.cwiseAbs().maxCoeff() <= opt.tolerance) &&
                    (mi == 0 || p.h.minCoeff() >= -opt.tolerance);
    r.status = feasible ? Status::Optimal : Status::NumericalError;
    r.x = Vec(0);
    r.y = Vec::Zero(me);
    r.z = Vec::Zero(mi);
    return r;
  }

  // Index sets of finite bounds.
  std::vector<Eigen::Index> lo_idx, up_idx;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(p.lower[i]))
      lo_idx.push_back(i);
    if (std::isfinite(p.upper[i]))
      up_idx.push_back(i);
  }
  const auto nl = static_cast<Eigen::Index>(lo_idx.size());
  const auto nu = static_cast<Eigen::Index>(up_idx.size());

  Vec x = Vec::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double l = p.lower[i], u = p.upper[i];
    if (std::isfinite(l) && std::isfinite(u))
      x[i] = 0.5 * (l + u);
    else if (std::isfinite(l))
      x[i] = l + 1.0;
    else if (std::isfinite(u))
      x[i] = u - 1.0;
  }
  Vec y = Vec::Zero(me);
  Vec s = (p.h - p.G * x).cwiseMax(1.0);
  Vec z = Vec::Ones(mi);
  Vec wl(nl), zl = Vec::Ones(nl), wu(nu), zu = Vec::Ones(nu);
  for (Eigen::Index k = 0; k < nl; ++k)
    wl[k] = std::max(x[lo_idx[k]] - p.lower[lo_idx[k]], 1.0);
  for (Eigen::Index k = 0; k < nu; ++k)
    wu[k] = std::max(p.upper[up_idx[k]] - x[up_idx[k]], 1.0);

  // Bound duals absorb the initial cost gradient where a bound allows it.
  {
    const Vec g = p.Q * x + p.c;
    std::vector<Eigen::Index> lo_pos(n, -1), up_pos(n, -1);
    for (Eigen::Index k = 0; k < nl; ++k)
      lo_pos[lo_idx[k]] = k;
    for (Eigen::Index k = 0; k < nu; ++k)
      up_pos[up_idx[k]] = k;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (g[i] > 0.0 && lo_pos[i] >= 0)
        zl[lo_pos[i]] += g[i];
      else if (g[i] < 0.0 && up_pos[i] >= 0)
        zu[up_pos[i]] -= g[i];
    }
  }

  const SpMat At = p.A.transpose();
  const SpMat Gt = p.G.transpose();
  const double scale_b = 1.0 + std::max({inf_norm(p.b), inf_norm(p.h)});
  const double scale_c = 1.0 + inf_norm(p.c);
  const Eigen::Index ncomp = mi + nl + nu;

  Result res;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt;
  for (int it = 0; it < opt.max_iterations; ++it) {
    res.iterations = it;
    // Residuals.
    Vec rd = p.Q * x + p.c + At * y + Gt * z;
    for (Eigen::Index k = 0; k < nl; ++k)
      rd[lo_idx[k]] -= zl[k];
    for (Eigen::Index k = 0; k < nu; ++k)
      rd[up_idx[k]] += zu[k];
    Vec rp = p.A * x - p.b;
    Vec rg = p.G * x + s - p.h;
    Vec rl(nl), ru(nu);
    for (Eigen::Index k = 0; k < nl; ++k)
      rl[k] = x[lo_idx[k]] - p.lower[lo_idx[k]] - wl[k];
    for (Eigen::Index k = 0; k < nu; ++k)
      ru[k] = x[up_idx[k]] + wu[k] - p.upper[up_idx[k]];

    const double gap = s.dot(z) + wl.dot(zl) + wu.dot(zu);
    const double mu = ncomp > 0 ? gap / static_cast<double>(ncomp) : 0.0;
    const double pres =
        std::max({inf_norm(rp), inf_norm(rg), inf_norm(rl), inf_norm(ru)});
    const double obj = 0.5 * x.dot(p.Q * x) + p.c.dot(x);
    const double worst = std::max({pres / scale_b, inf_norm(rd) / scale_c,
                                   gap / (1.0 + std::abs(obj))});
    if (worst < opt.tolerance) {
      res.status = Status::Optimal;
      break;
    }
    const bool acceptable = worst < opt.loose_tolerance;

    // Reduced KKT: [H A'; A -delta I].
    Vec diag = Vec::Zero(n);
    for (Eigen::Index k = 0; k < nl; ++k)
      diag[lo_idx[k]] += zl[k] / wl[k];
    for (Eigen::Index k = 0; k < nu; ++k)
      diag[up_idx[k]] += zu[k] / wu[k];
    Vec sig = z.cwiseQuotient(s);
    SpMat H = p.Q + Gt * sig.asDiagonal() * p.G;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(H.nonZeros() + p.A.nonZeros() + n + me));
    for (int col = 0; col < H.outerSize(); ++col)
      for (SpMat::InnerIterator e(H, col); e; ++e)
        if (e.row() >= e.col())
          trip.emplace_back(e.row(), e.col(), e.value());
    for (Eigen::Index i = 0; i < n; ++i)
      trip.emplace_back(i, i, diag[i]);
    for (int col = 0; col < p.A.outerSize(); ++col)
      for (SpMat::InnerIterator e(p.A, col); e; ++e)
        trip.emplace_back(n + e.row(), e.col(), e.value());
    SpMat K(n + me, n + me);
    K.setFromTriplets(trip.begin(), trip.end());
    // Regularized factorization, retried with a larger shift on failure.
    double reg = opt.regularization;
    SpMat shift(n + me, n + me);
    for (;;) {
      std::vector<Eigen::Triplet<double>> d;
      for (Eigen::Index i = 0; i < n + me; ++i)
        d.emplace_back(i, i, i < n ? reg : -reg);
      shift.setFromTriplets(d.begin(), d.end());
      ldlt.compute(SpMat(K + shift));
      if (ldlt.info() == Eigen::Success || reg > 1e-4)
        break;
      reg *= 100.0;
    }
    if (ldlt.info() != Eigen::Success) {
      res.status = acceptable ? Status::Inaccurate : Status::NumericalError;
      break;
    }
    const SpMat Kfull = K.selfadjointView<Eigen::Lower>();
    // Iterative refinement against the unregularized system.
    auto kkt_solve = [&](const Vec &rhs) {
      Vec sol = ldlt.solve(rhs);
      for (int r = 0; r < 3; ++r)
        sol += ldlt.solve(Vec(rhs - Kfull * sol));
      return sol;
    };

    // Solves for a given complementarity target (rsz, rlz, ruz are the
    // complementarity residuals s*z - target etc.).
    auto direction = [&](const Vec &rsz, const Vec &rlz, const Vec &ruz,
                         Vec &dx, Vec &dy, Vec &ds, Vec &dz, Vec &dwl,
                         Vec &dzl, Vec &dwu, Vec &dzu) {
      Vec rhs_x = -rd - Gt * ((-rsz + z.cwiseProduct(rg)).cwiseQuotient(s));
      for (Eigen::Index k = 0; k < nl; ++k)
        rhs_x[lo_idx[k]] += (-rlz[k] - zl[k] * rl[k]) / wl[k];
      for (Eigen::Index k = 0; k < nu; ++k)
        rhs_x[up_idx[k]] -= (-ruz[k] + zu[k] * ru[k]) / wu[k];
      Vec rhs(n + me);
      rhs << rhs_x, -rp;
      Vec sol = kkt_solve(rhs);
      dx = sol.head(n);
      dy = sol.tail(me);
      ds = -rg - p.G * dx;
      dz = (-rsz - z.cwiseProduct(ds)).cwiseQuotient(s);
      dwl.resize(nl);
      dzl.resize(nl);
      for (Eigen::Index k = 0; k < nl; ++k) {
        dwl[k] = dx[lo_idx[k]] + rl[k];
        dzl[k] = (-rlz[k] - zl[k] * dwl[k]) / wl[k];
      }
      dwu.resize(nu);
      dzu.resize(nu);
      for (Eigen::Index k = 0; k < nu; ++k) {
        dwu[k] = -ru[k] - dx[up_idx[k]];
        dzu[k] = (-ruz[k] - zu[k] * dwu[k]) / wu[k];
      }
    };

    Vec dx, dy, ds, dz, dwl, dzl, dwu, dzu;
    // Predictor (affine scaling).
    direction(s.cwiseProduct(z), wl.cwiseProduct(zl), wu.cwiseProduct(zu), dx,
              dy, ds, dz, dwl, dzl, dwu, dzu);
    double ap = std::min({max_step(s, ds), max_step(wl, dwl), max_step(wu, dwu)});
    double ad = std::min({max_step(z, dz), max_step(zl, dzl), max_step(zu, dzu)});
    double alpha = std::min(ap, ad);
    double gap_aff = (s + alpha * ds).dot(z + alpha * dz) +
                     (wl + alpha * dwl).dot(zl + alpha * dzl) +
                     (wu + alpha * dwu).dot(zu + alpha * dzu);
    double sigma = ncomp > 0 && gap > 0.0 ? std::pow(gap_aff / gap, 3) : 0.0;
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector with centering.
    Vec rsz = s.cwiseProduct(z) + ds.cwiseProduct(dz) -
              Vec::Constant(mi, sigma * mu);
    Vec rlz = wl.cwiseProduct(zl) + dwl.cwiseProduct(dzl) -
              Vec::Constant(nl, sigma * mu);
    Vec ruz = wu.cwiseProduct(zu) + dwu.cwiseProduct(dzu) -
              Vec::Constant(nu, sigma * mu);
    direction(rsz, rlz, ruz, dx, dy, ds, dz, dwl, dzl, dwu, dzu);
    auto step_length = [&] {
      double a = std::min({max_step(s, ds), max_step(wl, dwl), max_step(wu, dwu),
                           max_step(z, dz), max_step(zl, dzl), max_step(zu, dzu)});
      return std::min(1.0, 0.995 * a);
    };
    alpha = step_length();
    const double gap_new = (s + alpha * ds).dot(z + alpha * dz) +
                           (wl + alpha * dwl).dot(zl + alpha * dzl) +
                           (wu + alpha * dwu).dot(zu + alpha * dzu);
    if (gap_new > (1.0 - 0.01 * alpha) * gap) {
      // The second-order term misfired: take a plain centering step.
      const double c = std::max(sigma, 0.5) * mu;
      direction(s.cwiseProduct(z) - Vec::Constant(mi, c),
                wl.cwiseProduct(zl) - Vec::Constant(nl, c),
                wu.cwiseProduct(zu) - Vec::Constant(nu, c), dx, dy, ds, dz, dwl,
                dzl, dwu, dzu);
      alpha = step_length();
    }

    x += alpha * dx;
    y += alpha * dy;
    s += alpha * ds;
    z += alpha * dz;
    wl += alpha * dwl;
    zl += alpha * dzl;
    wu += alpha * dwu;
    zu += alpha * dzu;
    res.status = Status::MaxIterations;
  }
  if (res.status == Status::MaxIterations) {
    // Accept the final iterate at the loose tolerance.
    const double pres = std::max(inf_norm(Vec(p.A * x - p.b)),
                                 inf_norm(Vec((p.G * x + s - p.h))));
    if (pres / scale_b < opt.loose_tolerance &&
        (s.dot(z) + wl.dot(zl) + wu.dot(zu)) /
                (1.0 + std::abs(0.5 * x.dot(p.Q * x) + p.c.dot(x))) <
            opt.loose_tolerance)
      res.status = Status::Inaccurate;
  }
  res.x = x;
  res.y = y;
  res.z = z;
  res.objective = 0.5 * x.dot(p.Q * x) + p.c.dot(x);
  return res;
}

} // namespace v2g::qp
