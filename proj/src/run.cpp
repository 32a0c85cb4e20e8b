#include "fracwell/run.hpp"

#include <cmath>
#include <iostream>

#include "fracwell/analyze.hpp"
#include "fracwell/errors.hpp"

namespace fracwell {

namespace {

std::string num(double x) { return format_double(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

Exec exec_of(const RunConfig& cfg) { return cfg.deterministic ? Exec::Serial : Exec::Parallel; }

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

void append_echo(Report& rep, const RunConfig& cfg) {
  for (auto& [k, v] : echo_config(cfg)) rep.emplace_back("config." + k, v);
}

void append_wells(Report& rep, const WellConstants& w) {
  rep.emplace_back("wells.C_star", num(w.C_star));
  rep.emplace_back("wells.q_minus", num(w.bounds.q_minus));
  rep.emplace_back("wells.q_plus", num(w.bounds.q_plus));
  rep.emplace_back("wells.h1", num(w.h1));
  rep.emplace_back("wells.M_const", num(w.M_const));
  rep.emplace_back("wells.d_est", num(w.d_est));
  rep.emplace_back("wells.d0", num(w.d0));
  rep.emplace_back("wells.b_root", w.b_root ? num(*w.b_root) : "none");
  rep.emplace_back("wells.nehari_samples", std::to_string(w.samples.size()));
}

void append_energy(Report& rep, const std::string& prefix, const EnergyReport& e) {
  rep.emplace_back(prefix + ".J", num(e.J));
  rep.emplace_back(prefix + ".I", num(e.I));
  rep.emplace_back(prefix + ".pairing", num(e.pairing));
  rep.emplace_back(prefix + ".lp1", num(e.lp1));
  rep.emplace_back(prefix + ".l2h", num(e.l2h));
  if (std::isfinite(e.seminorm_A)) rep.emplace_back(prefix + ".seminorm_A", num(e.seminorm_A));
}

void append_decay(Report& rep, const DecayVerdict& v) {
  rep.emplace_back("decay.applicable", flag(v.applicable));
  if (!v.notice.empty()) rep.emplace_back("decay.notice", v.notice);
  rep.emplace_back("decay.strictly_decreasing", flag(v.strictly_decreasing));
  rep.emplace_back("decay.fit_rate", num(v.fit_rate));
  rep.emplace_back("decay.fit_r2", num(v.fit_r2));
  rep.emplace_back("decay.bracket_ok", flag(v.bracket_ok));
  rep.emplace_back("decay.comparable_C", num(v.comparable_C));
  rep.emplace_back("decay.comparable_from_l2h", flag(v.comparable_from_l2h));
}

void append_blowup(Report& rep, const BlowupVerdict& v) {
  rep.emplace_back("blowup.detected", flag(v.detected));
  rep.emplace_back("blowup.conclusive", flag(v.conclusive));
  rep.emplace_back("blowup.t_blow_est", num(v.t_blow_est));
  rep.emplace_back("blowup.theta", num(v.theta));
  rep.emplace_back("blowup.xi_min", num(v.xi_min));
  rep.emplace_back("blowup.I_always_negative", flag(v.I_always_negative));
  rep.emplace_back("blowup.cauchy_schwarz_ok", flag(v.cauchy_schwarz_ok));
  rep.emplace_back("blowup.concavity_residual", num(v.concavity_residual));
}

void append_monitor(Report& rep, const EnergyMonitor& m) {
  rep.emplace_back("energy.drift", num(m.drift));
  rep.emplace_back("energy.dJ_residual", num(m.dJ_residual));
  rep.emplace_back("energy.dl2h_residual", num(m.dl2h_residual));
  rep.emplace_back("energy.diss_nondecreasing", flag(m.diss_nondecreasing));
}

std::string snapshot_name(std::size_t k) {
  std::string n = std::to_string(k);
  return "snap_" + std::string(n.size() < 5 ? 5 - n.size() : 0, '0') + n + ".txt";
}

}  // namespace

SimulateResult run_simulate(const RunConfig& cfg, const std::filesystem::path& dir,
                            const std::filesystem::path& base) {
  ensure_dir(dir);
  const Model model(cfg.problem, exec_of(cfg));
  const Field u0 = make_initial(cfg, base);
  SimulateResult res;
  res.initial = energy_report(u0, model);
  res.wells = well_constants(model, cfg.wells);
  res.initial_class = classify(res.initial, res.wells);
  res.trajectory = evolve(u0, model, cfg.evolve);
  const Trajectory& tr = res.trajectory;

  // The status must agree with how the trace ended.
  if (tr.status == RunStatus::Completed) {
    if (tr.trace.empty() || tr.overflow || std::abs(tr.trace.back().t - cfg.evolve.t_end) > 1e-9 * cfg.evolve.t_end)
      throw InvariantError("run reported completed but the trace stops before t_end");
  }

  write_trace_csv(dir / "trace.csv", tr.trace);
  if (!tr.snapshots.empty()) {
    ensure_dir(dir / "snapshots");
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k)
      write_snapshot(dir / "snapshots" / snapshot_name(k), tr.snapshots[k]);
  }
  if (tr.status != RunStatus::BlowupDetected && !tr.trace.empty())
    write_snapshot(dir / "final.txt", {tr.trace.back().t, tr.final_field});

  Report& rep = res.report;
  append_echo(rep, cfg);
  rep.emplace_back("status", to_string(tr.status));
  rep.emplace_back("records", std::to_string(tr.trace.size()));
  rep.emplace_back("t_final", tr.trace.empty() ? "0" : num(tr.trace.back().t));
  rep.emplace_back("halvings", std::to_string(tr.halvings));
  rep.emplace_back("final_dt", num(tr.final_dt));
  append_energy(rep, "initial", res.initial);
  rep.emplace_back("initial.class", to_string(res.initial_class));
  append_wells(rep, res.wells);
  append_monitor(rep, energy_monitor(tr.trace));
  if (tr.status == RunStatus::Completed) append_decay(rep, verify_decay(tr.trace, res.wells));
  if (tr.status == RunStatus::BlowupDetected || tr.status == RunStatus::BlowupSuspected)
    append_blowup(rep, detect_blowup(tr.trace, cfg.problem.p, tr.overflow, cfg.evolve.blowup_threshold));
  write_report(dir / "report.txt", rep);
  return res;
}

Report run_wells(const RunConfig& cfg, const std::filesystem::path& dir) {
  ensure_dir(dir);
  const Model model(cfg.problem, exec_of(cfg));
  const WellConstants w = well_constants(model, cfg.wells);
  if (w.d_est + 1e-12 * std::abs(w.M_const) < w.M_const)
    throw InvariantError("Nehari sample below the depth bound: d_est < M_const");
  write_d_curve_csv(dir / "d_curve.csv", w.d_curve);
  Report rep;
  append_echo(rep, cfg);
  append_wells(rep, w);
  write_report(dir / "wells.txt", rep);
  return rep;
}

Report run_groundstate(const RunConfig& cfg, const std::filesystem::path& dir, const std::filesystem::path& base) {
  ensure_dir(dir);
  const Model model(cfg.problem, exec_of(cfg));
  const GroundState gs = ground_state_solve(model, make_initial(cfg, base), cfg.ground_iters, cfg.ground_tol);
  write_snapshot(dir / "u_star.txt", {0.0, gs.u_star});
  Report rep;
  append_echo(rep, cfg);
  rep.emplace_back("ground.J_star", num(gs.J_star));
  rep.emplace_back("ground.dual_residual", num(gs.dual_residual));
  rep.emplace_back("ground.nehari_residual", num(gs.nehari_residual));
  rep.emplace_back("ground.iterations", std::to_string(gs.iterations));
  rep.emplace_back("ground.converged", flag(gs.converged));
  rep.emplace_back("ground.stagnated", flag(gs.stagnated));
  write_report(dir / "groundstate.txt", rep);
  return rep;
}

Report run_analyze(const RunConfig& cfg, const Trace& trace, const std::filesystem::path& dir) {
  ensure_dir(dir);
  const Model model(cfg.problem, exec_of(cfg));
  const WellConstants w = well_constants(model, cfg.wells);
  Report rep;
  append_echo(rep, cfg);
  append_wells(rep, w);
  rep.emplace_back("records", std::to_string(trace.size()));
  append_monitor(rep, energy_monitor(trace));
  append_decay(rep, verify_decay(trace, w));
  append_blowup(rep, detect_blowup(trace, cfg.problem.p, false, cfg.evolve.blowup_threshold));
  std::vector<double> deltas;
  for (const auto& d : w.d_curve) deltas.push_back(d.delta);
  const InvarianceAudit audit = invariance_audit(trace, w, deltas);
  rep.emplace_back("invariance.skipped", flag(audit.skipped));
  if (!audit.notice.empty()) rep.emplace_back("invariance.notice", audit.notice);
  if (!audit.skipped) {
    rep.emplace_back("invariance.delta1", num(audit.delta1));
    rep.emplace_back("invariance.delta2", num(audit.delta2));
    bool ok = true;
    for (const auto& e : audit.entries) ok = ok && e.constant_sign;
    rep.emplace_back("invariance.constant_sign", flag(ok));
    rep.emplace_back("invariance.deltas_checked", std::to_string(audit.entries.size()));
  }
  write_report(dir / "analyze.txt", rep);
  return rep;
}

int run_cli(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    RunConfig cfg;
    std::filesystem::path base;
    if (opts.config) {
      cfg = load_config(*opts.config);
      base = opts.config->parent_path();
    } else if (opts.subcommand != "verify") {
      err << "error: --config is required for " << opts.subcommand << "\n";
      return kExitConfig;
    }
    cfg.deterministic = cfg.deterministic || opts.deterministic;
    const std::filesystem::path dir = opts.out ? *opts.out : std::filesystem::path(cfg.output_dir);
    for (const auto& w : cfg.warnings) err << "warning: " << w << "\n";

    const auto print = [&](const Report& rep) {
      for (const auto& [k, v] : rep)
        if (k.rfind("config.", 0) != 0) out << k << " = " << v << "\n";
    };

    if (opts.subcommand == "simulate") {
      const SimulateResult r = run_simulate(cfg, dir, base);
      print(r.report);
      return kExitOk;
    }
    if (opts.subcommand == "wells") {
      print(run_wells(cfg, dir));
      return kExitOk;
    }
    if (opts.subcommand == "groundstate") {
      print(run_groundstate(cfg, dir, base));
      return kExitOk;
    }
    if (opts.subcommand == "analyze") {
      if (!opts.trace) {
        err << "error: analyze needs --trace <csv>\n";
        return kExitConfig;
      }
      print(run_analyze(cfg, read_trace_csv(*opts.trace), dir));
      return kExitOk;
    }
    if (opts.subcommand == "verify") {
      const auto results = verify_suite(cfg);
      bool all = true;
      for (const auto& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) out << "  (" << r.detail << ")";
        out << "\n";
        all = all && r.pass;
      }
      out << (all ? "all checks passed\n" : "some checks failed\n");
      return all ? kExitOk : kExitInvariant;
    }
    err << "error: unknown subcommand '" << opts.subcommand << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "configuration invalid:\n";
    for (const auto& p : e.problems()) err << "  - " << p << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InvariantError& e) {
    err << "invariant breach: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const HypothesisViolation& e) {
    err << "hypothesis violated: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace fracwell
