#include <algorithm>
#include <cmath>
#include <filesystem>

#include "fracwell/analyze.hpp"
#include "fracwell/run.hpp"

namespace fracwell {

namespace {

std::string num(double x) { return format_double(x); }

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Direct double loop over ordered padded node pairs with at least one interior node.
struct NaiveSums {
  double modular = 0.0;
  double pairing = 0.0;
  double seminorm2 = 0.0;
};

NaiveSums naive_sums(const Field& u, double s, const MagneticField& A, const NFunction& G) {
  const Domain1D& d = u.domain;
  const double h = d.h();
  NaiveSums out;
  auto value = [&](int k) { return d.is_interior(k) ? u.values[k - d.pad] : Complex{}; };
  for (int k = 0; k < d.total_nodes(); ++k) {
    for (int l = 0; l < d.total_nodes(); ++l) {
      if (k == l || (!d.is_interior(k) && !d.is_interior(l))) continue;
      const double x = d.node(k), y = d.node(l);
      const double r = std::abs(x - y);
      const Complex ph = std::polar(1.0, (x - y) * A(0.5 * (x + y)));
      const double mag = std::abs(value(k) - ph * value(l)) / std::pow(r, s);
      const double w = h * h / r;
      out.modular += w * G.G(mag);
      out.pairing += w * G.g(mag) * mag;
      out.seminorm2 += w * std::norm(value(k) - value(l)) / std::pow(r, 2.0 * s);
    }
  }
  return out;
}

Field random_field(const Domain1D& d, Rng& rng) {
  Eigen::VectorXcd v(d.m);
  for (int i = 0; i < d.m; ++i) v[i] = Complex(rng.normal(), rng.normal());
  return Field(d, v);
}

ProblemParams small_problem(const RunConfig& cfg, int m) {
  ProblemParams p = cfg.problem;
  p.domain.m = m;
  p.domain.pad = m;
  return p;
}

CheckResult check_oracle(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  double worst = 0.0;
  const MagneticField fields[] = {{MagneticKind::Zero, 0.0}, {MagneticKind::Constant, 1.3}, {MagneticKind::Linear, 0.7}};
  for (const auto& A : fields) {
    ProblemParams pp = small_problem(cfg, 6);
    pp.magnetic = A;
    const Model model(pp, Exec::Serial);
    for (int trial = 0; trial < 5; ++trial) {
      const Field u = random_field(pp.domain, rng);
      const NaiveSums ref = naive_sums(u, pp.s, A, pp.G);
      const EnergyReport e = energy_report(u, model, ReportDetail::Scalars);
      worst = std::max({worst, rel(e.rho_A, ref.modular), rel(e.pairing, ref.pairing), rel(e.seminorm2, ref.seminorm2)});
    }
  }
  return {"pair sums match a direct double loop", worst < 1e-12, "max rel err " + num(worst)};
}

CheckResult check_exec_agreement(const RunConfig& cfg) {
  ProblemParams pp = small_problem(cfg, 24);
  pp.magnetic = {MagneticKind::Linear, 0.5};
  const Model serial(pp, Exec::Serial), parallel(pp, Exec::Parallel);
  Rng rng(cfg.seed + 1);
  const Field u = random_field(pp.domain, rng);
  const auto a = energy_report(u, serial, ReportDetail::Scalars), b = energy_report(u, parallel, ReportDetail::Scalars);
  const Eigen::VectorXcd ga = modular_gradient(u, serial), gb = modular_gradient(u, parallel);
  const double worst = std::max({rel(a.rho_A, b.rho_A), rel(a.pairing, b.pairing), (ga - gb).norm() / ga.norm()});
  return {"serial and OpenMP kernels agree", worst < 1e-12, "max rel diff " + num(worst)};
}

CheckResult check_gradient(const RunConfig& cfg) {
  ProblemParams pp = small_problem(cfg, 8);
  pp.magnetic = {MagneticKind::Constant, 0.9};
  const Model model(pp, Exec::Serial);
  Rng rng(cfg.seed + 2);
  const Field u = random_field(pp.domain, rng);
  const Eigen::VectorXcd grad = modular_gradient(u, model);
  const double step = 1e-6;
  double err = 0.0;
  for (int i = 0; i < pp.domain.m; ++i) {
    for (const Complex dir : {Complex(1, 0), Complex(0, 1)}) {
      Field up = u, dn = u;
      up.values[i] += step * dir;
      dn.values[i] -= step * dir;
      const double fd = (energy_report(up, model, ReportDetail::Scalars).rho_A -
                         energy_report(dn, model, ReportDetail::Scalars).rho_A) / (2.0 * step);
      const double an = dir.real() != 0.0 ? grad[i].real() : grad[i].imag();
      err = std::max(err, std::abs(fd - an));
    }
  }
  err /= grad.cwiseAbs().maxCoeff();
  return {"modular gradient matches central differences", err < 1e-6, "max rel err " + num(err)};
}

CheckResult check_nehari(const RunConfig& cfg) {
  ProblemParams pp = small_problem(cfg, 16);
  const Model model(pp, Exec::Serial);
  Rng rng(cfg.seed + 3);
  int bad = 0;
  for (int k = 0; k < 20; ++k) {
    const Field u = random_trial(pp.domain, rng);
    const RayProfile ray(u, model);
    const double lam = nehari_project(ray).lambda_star;
    const double pair = ray.sums(lam).pairing;
    if (!(ray.I(0.5 * lam) > 0.0 && ray.I(2.0 * lam) < 0.0 && std::abs(ray.I(lam)) < 1e-9 * pair)) ++bad;
  }
  return {"Nehari projection sign pattern", bad == 0, std::to_string(bad) + " violations of 20"};
}

CheckResult check_inequalities(const RunConfig& cfg) {
  Rng rng(cfg.seed + 4);
  const NFunction& G = cfg.problem.G;
  int bad = 0, cases = 0;
  for (int k = 0; k < 2000; ++k) {
    const double a = rng.log_uniform(1e-3, 1e3), t = rng.log_uniform(1e-3, 1e3);
    bad += !power_comparison_check(G, a, t);
    bad += !young_check(G, a, t);
    bad += !conjugate_bound_check(G, t);
    const Complex u1(rng.normal(), rng.normal()), u2(rng.normal(), rng.normal());
    bad += !nonlinear_lipschitz_check(u1, u2, cfg.problem.p);
    bad += !(monotone_operator_check(u1, u2, G).lhs >= 0.0);
    cases += 5;
  }
  return {"Orlicz and nonlinearity inequalities", bad == 0, std::to_string(bad) + " of " + std::to_string(cases)};
}

CheckResult check_energy_identity(const RunConfig& cfg) {
  ProblemParams pp = small_problem(cfg, 16);
  const Model model(pp, Exec::Serial);
  Eigen::VectorXcd v(pp.domain.m);
  for (int i = 0; i < pp.domain.m; ++i) {
    const double x = pp.domain.interior_node(i);
    const double c = 0.5 * (pp.domain.a + pp.domain.b), w = 0.25 * (pp.domain.b - pp.domain.a);
    v[i] = 0.3 * std::exp(-((x - c) / w) * ((x - c) / w));
  }
  StepperOptions so;
  so.dt = 1e-3;
  so.t_end = 0.1;
  const Trajectory tr = evolve(Field(pp.domain, v), model, so);
  const EnergyMonitor mon = energy_monitor(tr.trace);
  const bool ok = tr.status == RunStatus::Completed && mon.drift < 1e-2 && mon.diss_nondecreasing;
  return {"energy identity along a short run", ok, "drift " + num(mon.drift)};
}

CheckResult check_depth_bound(const RunConfig& cfg) {
  ProblemParams pp = small_problem(cfg, 16);
  const Model model(pp, Exec::Serial);
  WellOptions wo;
  wo.trials = 16;
  wo.climb_starts = 2;
  wo.climb_iters = 40;
  wo.delta_points = 16;
  wo.seed = cfg.seed;
  const WellConstants w = well_constants(model, wo);
  return {"Nehari samples dominate the depth bound", w.d_est >= w.M_const,
          "d_est " + num(w.d_est) + ", M " + num(w.M_const)};
}

CheckResult check_roundtrip(const RunConfig& cfg) {
  Rng rng(cfg.seed + 5);
  Trace tr;
  for (int k = 0; k < 20; ++k) {
    TraceRecord r;
    r.t = k * 0.1;
    r.J = rng.normal();
    r.I = rng.normal() * 1e-17;
    r.l2h = rng.log_uniform(1e-300, 1e300);
    r.lp1 = rng.uniform();
    r.ut_l2h = rng.uniform();
    r.diss = rng.uniform();
    r.F = rng.uniform();
    r.drift = rng.normal();
    tr.push_back(r);
  }
  const std::string text = trace_csv(tr);
  const bool trace_ok = trace_csv(parse_trace_csv(text)) == text;

  const auto dir = std::filesystem::temp_directory_path() / ("fracwell_verify_" + std::to_string(cfg.seed));
  std::filesystem::create_directories(dir);
  ProblemParams pp = small_problem(cfg, 8);
  const Field u = random_field(pp.domain, rng);
  write_snapshot(dir / "snap.txt", {0.25, u});
  const Snapshot back = read_snapshot(dir / "snap.txt");
  const bool snap_ok = back.u.domain == u.domain && back.u.values == u.values && back.t == 0.25;
  std::filesystem::remove_all(dir);
  return {"trace CSV and snapshot round trips", trace_ok && snap_ok, ""};
}

}  // namespace

std::vector<CheckResult> verify_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  using Check = CheckResult (*)(const RunConfig&);
  const Check checks[] = {check_oracle,   check_exec_agreement,  check_gradient,    check_nehari,
                          check_inequalities, check_energy_identity, check_depth_bound, check_roundtrip};
  for (Check c : checks) {
    try {
      out.push_back(c(cfg));
    } catch (const std::exception& e) {
      out.push_back({"check raised an exception", false, e.what()});
    }
  }
  return out;
}

}  // namespace fracwell
