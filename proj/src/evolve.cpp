#include "fracwell/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "fracwell/errors.hpp"

namespace fracwell {

std::string to_string(Scheme s) { return s == Scheme::Explicit ? "explicit" : "picard"; }

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::BlowupDetected: return "blowup-detected";
    case RunStatus::BlowupSuspected: return "blowup-suspected";
    case RunStatus::StepFailure: return "step-failure";
  }
  return "unknown";
}

Field magnetic_residual(const Field& u, const Model& model) {
  return Field(u.domain, modular_gradient(u, model) / model.h());
}

Eigen::VectorXcd flow_velocity(const Field& u, const Model& model) {
  Eigen::VectorXcd rhs = -modular_gradient(u, model);
  if (model.params().source) {
    const double p = model.p();
    for (Eigen::Index i = 0; i < rhs.size(); ++i)
      rhs[i] += model.h() * std::pow(std::abs(u.values[i]), p - 1.0) * u.values[i];
  }
  return model.solve_metric(rhs);
}

namespace {

bool all_finite(const Eigen::VectorXcd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  return true;
}

}  // namespace

Stepper::Stepper(const Model& model, StepperOptions opts) : model_(&model), opts_(opts), dt_(opts.dt) {
  set_dt(opts.dt);
}

void Stepper::set_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractError("time step must be positive");
  dt_ = dt;
}

StepOutcome Stepper::step(const Field& u, double dt) const {
  StepOutcome out;
  Eigen::VectorXcd v = u.values + dt * flow_velocity(u, *model_);
  out.iterations = 1;
  if (!all_finite(v)) {
    out.finite = false;
    out.next = Field(u.domain, v);
    return out;
  }
  if (opts_.scheme == Scheme::Picard) {
    // Backward Euler by fixed-point iteration v <- u + dt K^{-1}(-B(v) + f(v)).
    out.converged = false;
    for (int k = 0; k < opts_.picard_max_iters; ++k) {
      Eigen::VectorXcd w = u.values + dt * flow_velocity(Field(u.domain, v), *model_);
      ++out.iterations;
      if (!all_finite(w)) {
        out.finite = false;
        v = w;
        break;
      }
      const double diff = (w - v).norm();
      const double ref = v.norm();
      v = std::move(w);
      if (diff <= opts_.picard_tol * ref) {
        out.converged = true;
        break;
      }
    }
  }
  out.next = Field(u.domain, std::move(v));
  return out;
}

Trajectory evolve(const Field& u0, const Model& model, const StepperOptions& opts) {
  require_same_grid(u0, model.table());
  if (!(opts.t_end > 0.0)) throw ContractError("t_end must be positive");
  if (opts.record_every < 1) throw ContractError("record_every must be at least 1");
  Stepper stepper(model, opts);
  Trajectory out;

  Field u = u0;
  EnergyReport rep = energy_report(u, model, ReportDetail::Scalars);
  const double J0 = rep.J;
  const double l2h0 = rep.l2h;
  const double norm0 = std::max(std::abs(J0), 1.0);
  double t = 0.0;
  double diss = 0.0;
  double int_l2h = 0.0;
  std::vector<double> l2h_hist{rep.l2h};
  std::vector<double> defects;

  auto make_record = [&](const Field& f, const EnergyReport& r) {
    TraceRecord rec;
    rec.t = t;
    rec.J = r.J;
    rec.I = r.I;
    rec.l2h = r.l2h;
    rec.lp1 = r.lp1;
    rec.ut_l2h = model.metric_norm2(flow_velocity(f, model));
    rec.diss = diss;
    rec.F = int_l2h + (opts.t_end - t) * l2h0;
    rec.drift = std::abs(diss + r.J - J0) / norm0;
    rec.seminorm2 = r.seminorm2;
    return rec;
  };
  auto push_record = [&](const Field& f, const EnergyReport& r) {
    out.trace.push_back(make_record(f, r));
    if (opts.snapshot_every > 0 && (out.trace.size() - 1) % static_cast<std::size_t>(opts.snapshot_every) == 0)
      out.snapshots.push_back({t, f});
  };
  push_record(u, rep);

  auto growing = [&] {
    const std::size_t n = l2h_hist.size();
    return n >= 2 && l2h_hist[n - 1] > l2h_hist[n - 2];
  };

  long steps = 0;
  bool recorded_last = true;
  const double t_stop = opts.t_end * (1.0 - 1e-12);
  while (t < t_stop) {
    const double dt = std::min(stepper.dt(), opts.t_end - t);
    StepOutcome so = stepper.step(u, dt);
    EnergyReport next_rep;
    bool ok = so.finite && so.converged;
    if (ok) {
      next_rep = energy_report(so.next, model, ReportDetail::Scalars);
      ok = std::isfinite(next_rep.J) && std::isfinite(next_rep.l2h);
    }
    double inc = 0.0;
    if (ok) {
      const Eigen::VectorXcd vel = (so.next.values - u.values) / dt;
      inc = dt * model.metric_norm2(vel);
      const double defect = std::abs(next_rep.J - rep.J + inc);
      if (defects.size() >= 8) {
        std::vector<double> tmp(defects);
        std::nth_element(tmp.begin(), tmp.begin() + static_cast<long>(tmp.size() / 2), tmp.end());
        const double median = tmp[tmp.size() / 2];
        if (defect > opts.spike_factor * median && defect > opts.spike_floor * inc) ok = false;
      }
      if (ok) defects.push_back(defect);
    }
    if (!ok) {
      if (out.halvings < opts.max_halvings) {
        ++out.halvings;
        stepper.set_dt(stepper.dt() * 0.5);
        continue;
      }
      out.overflow = !so.finite || (so.converged && !std::isfinite(next_rep.J));
      out.status = growing() || out.overflow ? RunStatus::BlowupSuspected : RunStatus::StepFailure;
      break;
    }
    int_l2h += 0.5 * dt * (rep.l2h + next_rep.l2h);
    diss += inc;
    t += dt;
    u = std::move(so.next);
    rep = next_rep;
    l2h_hist.push_back(rep.l2h);
    ++steps;
    recorded_last = false;
    const std::size_t n = l2h_hist.size();
    const bool accelerating =
        n >= 3 && l2h_hist[n - 1] - 2.0 * l2h_hist[n - 2] + l2h_hist[n - 3] > 0.0 && growing();
    if (rep.l2h > opts.blowup_threshold && accelerating) {
      push_record(u, rep);
      recorded_last = true;
      out.status = RunStatus::BlowupDetected;
      break;
    }
    if (steps % opts.record_every == 0 || t >= t_stop) {
      push_record(u, rep);
      recorded_last = true;
    }
  }
  if (!recorded_last && out.trace.back().t < t) push_record(u, rep);
  out.final_dt = stepper.dt();
  out.final_field = std::move(u);
  return out;
}

EnergyMonitor energy_monitor(const Trace& trace) {
  if (trace.size() < 2) throw ContractError("energy monitor needs at least two records");
  EnergyMonitor m;
  const double J0 = trace.front().J;
  const double norm0 = std::max(std::abs(J0), 1.0);
  double ut_max = 0.0, I_max = 0.0;
  for (const auto& r : trace) {
    m.drift = std::max(m.drift, std::abs(r.diss + r.J - J0) / norm0);
    ut_max = std::max(ut_max, r.ut_l2h);
    I_max = std::max(I_max, std::abs(r.I));
  }
  for (std::size_t k = 1; k < trace.size(); ++k) {
    const auto& a = trace[k - 1];
    const auto& b = trace[k];
    const double dt = b.t - a.t;
    if (b.diss < a.diss) m.diss_nondecreasing = false;
    const double dJ = (b.J - a.J) / dt + 0.5 * (a.ut_l2h + b.ut_l2h);
    const double dl = 0.5 * (b.l2h - a.l2h) / dt + 0.5 * (a.I + b.I);
    if (ut_max > 0.0) m.dJ_residual = std::max(m.dJ_residual, std::abs(dJ) / ut_max);
    if (I_max > 0.0) m.dl2h_residual = std::max(m.dl2h_residual, std::abs(dl) / I_max);
  }
  return m;
}

}  // namespace fracwell
