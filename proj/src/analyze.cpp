#include "fracwell/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracwell/errors.hpp"

namespace fracwell {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool trend_decreasing(const std::vector<double>& t, const std::vector<double>& v) {
  if (v.size() < 2 || !(v.back() < v.front())) return false;
  std::vector<double> lv;
  for (double x : v) lv.push_back(std::log(std::max(x, 1e-300)));
  return fit_line(t, lv).slope < 0.0;
}
}  // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractError("fit_line needs two or more points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

DecayVerdict verify_decay(const Trace& trace, const WellConstants& consts) {
  DecayVerdict v;
  if (trace.size() < 2) {
    v.applicable = false;
    v.notice = "trace too short";
    return v;
  }
  const auto& r0 = trace.front();
  if (r0.l2h == 0.0) {
    v.notice = "zero initial data";
    return v;
  }
  if (!(r0.J < consts.M_const && r0.I > 0.0)) {
    v.applicable = false;
    v.notice = "initial data not in W with J(u0) < M";
  }
  const double p = consts.p;
  const auto& b = consts.bounds;
  const double factor = std::max(std::pow(consts.C_star, p + 1.0) / std::pow(b.q_minus, (p + 1.0) / b.q_minus), 1.0);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& r = trace[k];
    if (k > 0) {
      const double d = r.l2h - trace[k - 1].l2h;
      if (d > 0.0) v.monotone = false;
      if (!(d < 0.0)) v.strictly_decreasing = false;
    }
    if (!(factor * std::pow(r.pairing(), (p + 1.0 - b.q_plus) / b.q_plus) < 1.0)) v.bracket_ok = false;
    const double pairing = r.pairing();
    if (pairing > 0.0) {
      const bool have = std::isfinite(r.seminorm2);
      if (!have) v.comparable_from_l2h = true;
      v.comparable_C = std::max(v.comparable_C, (have ? r.seminorm2 : r.l2h) / pairing);
    }
  }
  v.comparable_ok = std::isfinite(v.comparable_C) && v.comparable_C > 0.0;
  std::vector<double> ts, ls;
  for (std::size_t k = trace.size() / 2; k < trace.size(); ++k) {
    if (!(trace[k].l2h > 0.0)) continue;
    ts.push_back(trace[k].t);
    ls.push_back(std::log(trace[k].l2h));
  }
  if (ts.size() >= 2) {
    const LineFit f = fit_line(ts, ls);
    v.fit_rate = f.slope;
    v.fit_r2 = f.r2;
  }
  return v;
}

BlowupVerdict detect_blowup(const Trace& trace, double p, bool overflow, double threshold) {
  if (!(p > 1.0)) throw ContractError("detect_blowup needs p > 1");
  BlowupVerdict v;
  v.theta = (p - 1.0) / 4.0;
  v.t_blow_est = kNaN;
  if (trace.empty()) {
    v.conclusive = false;
    v.detected = overflow;
    return v;
  }
  const std::size_t n = trace.size();
  bool above = false;
  if (n >= 3) {
    const double a = trace[n - 3].l2h, b = trace[n - 2].l2h, c = trace[n - 1].l2h;
    above = c > threshold && c - 2.0 * b + a > 0.0 && c > b;
  }
  v.detected = overflow || above;
  v.I_always_negative = true;
  v.xi_min = std::numeric_limits<double>::infinity();
  double I_max = 0.0;
  const double l0 = trace.front().l2h;
  for (const auto& r : trace) {
    if (!(r.I < 0.0)) v.I_always_negative = false;
    v.xi_min = std::min(v.xi_min, -2.0 * r.I - (p + 3.0) * r.diss);
    I_max = std::max(I_max, std::abs(r.I));
    const double Fp = r.l2h - l0;
    if (Fp * Fp > 4.0 * r.F * r.diss * (1.0 + 1e-9) + 1e-300) v.cauchy_schwarz_ok = false;
  }
  // F' = l2h - l2h(0), so F'' is the derivative of l2h: compare with -2I at midpoints.
  for (std::size_t k = 1; k < n; ++k) {
    const double dt = trace[k].t - trace[k - 1].t;
    const double Fpp = (trace[k].l2h - trace[k - 1].l2h) / dt;
    const double res = std::abs(Fpp + (trace[k].I + trace[k - 1].I));
    if (I_max > 0.0) v.concavity_residual = std::max(v.concavity_residual, res / I_max);
  }
  if (n < 10) {
    v.conclusive = false;
    return v;
  }
  std::vector<double> ts, ys;
  for (std::size_t k = n - n / 4 - 1; k < n; ++k) {
    ts.push_back(trace[k].t);
    ys.push_back(std::pow(trace[k].F, -v.theta));
  }
  const LineFit f = fit_line(ts, ys);
  if (f.slope < 0.0) v.t_blow_est = -f.intercept / f.slope;
  return v;
}

GroundState ground_state_solve(const Model& model, const Field& seed, int iters, double tol) {
  require_same_grid(seed, model.table());
  const double h = model.h();
  auto project = [&](const Field& w) {
    const auto proj = nehari_project(w, model);
    return std::pair{Field(w.domain, proj.lambda_star * w.values), proj.J_at};
  };
  auto [u, J] = project(seed);
  GroundState gs;
  Eigen::VectorXcd r = energy_gradient(u, model) / h;
  Eigen::VectorXcd u_prev, r_prev;
  double alpha = 1e-2;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (gs.iterations = 0; gs.iterations < iters; ++gs.iterations) {
    const double res = r.norm() * std::sqrt(h);
    if (res < tol * std::max(1.0, std::abs(J))) {
      gs.converged = true;
      break;
    }
    if (u_prev.size() > 0) {
      const Eigen::VectorXcd s = u.values - u_prev;
      const Eigen::VectorXcd y = r - r_prev;
      const double sy = (s.conjugate().transpose() * y)(0, 0).real();
      if (sy > 0.0) alpha = s.squaredNorm() / sy;
    }
    // J'(u) . (-r) = -h |r|^2 sets the Armijo reference decrease.
    const double decrease = h * r.squaredNorm();
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      auto [trial, Jt] = project(Field(u.domain, u.values - alpha * r));
      // Near the minimum J changes below roundoff; a residual decrease then decides.
      const bool armijo = Jt <= J - 1e-4 * alpha * decrease;
      const bool flat = !armijo && Jt <= J + 64.0 * eps * std::abs(J) &&
                        energy_gradient(trial, model).norm() < h * r.norm();
      if (armijo || flat) {
        u_prev = u.values;
        r_prev = r;
        u = std::move(trial);
        J = Jt;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      gs.stagnated = true;
      break;
    }
    r = energy_gradient(u, model) / h;
  }
  const EnergyReport rep = energy_report(u, model, ReportDetail::Scalars);
  gs.J_star = rep.J;
  gs.nehari_residual = std::abs(rep.I);
  gs.dual_residual = dual_residual(u, model);
  gs.u_star = std::move(u);
  return gs;
}

OmegaReport omega_limit_check(const std::vector<Snapshot>& snapshots, const GroundState& ground,
                              const Model& model) {
  OmegaReport out;
  if (snapshots.empty()) return out;
  out.empty = false;
  for (const auto& s : snapshots) {
    out.t.push_back(s.t);
    out.J.push_back(energy_report(s.u, model, ReportDetail::Scalars).J);
    out.dual.push_back(dual_residual(s.u, model));
    out.dist_zero.push_back(seminorm_A(s.u, model));
    out.dist_ground.push_back(seminorm_A(Field(s.u.domain, s.u.values - ground.u_star.values), model));
  }
  const double J0 = out.J.front();
  const double tol = 1e-12 * std::max(std::abs(J0), 1.0);
  for (std::size_t k = 1; k < out.J.size(); ++k)
    if (out.J[k] > out.J[k - 1] + tol) out.J_monotone = false;
  out.J_limit = out.J.back();
  out.limit_in_range = out.J_limit >= -tol && out.J_limit <= J0 + tol;
  out.dual_trend_decreasing = trend_decreasing(out.t, out.dual);
  const bool zero = out.dist_zero.back() <= out.dist_ground.back();
  out.selected = zero ? "0" : "u_star";
  out.distance_trend_decreasing = trend_decreasing(out.t, zero ? out.dist_zero : out.dist_ground);
  return out;
}

}  // namespace fracwell
