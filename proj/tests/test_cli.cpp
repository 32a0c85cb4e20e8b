#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "fracwell/errors.hpp"
#include "fracwell/run.hpp"

using namespace fracwell;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fracwell_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> problems_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

const char* kSmall =
    "domain.a = -200\n"
    "domain.b = 200\n"
    "domain.m = 16\n"
    "initial.scale = 0.05\n"
    "evolve.t_end = 0.2\n"
    "evolve.record_every = 10\n"
    "wells.trials = 8\n"
    "wells.climb_starts = 1\n"
    "wells.climb_iters = 10\n"
    "wells.delta_points = 8\n"
    "groundstate.iters = 500\n";

}  // namespace

TEST_CASE("valid reference configuration") {
  const auto cfg = parse_config("frac.s = 0.5\np = 3\ng.kind = power\ng.q = 2\ndomain.a = -1\ndomain.b = 1\ndomain.m = 64\n");
  CHECK(cfg.problem.s == 0.5);
  CHECK(cfg.problem.p == 3.0);
  CHECK(cfg.problem.domain.m == 64);
  CHECK(cfg.problem.domain.pad == 64);
  CHECK(cfg.problem.G.bounds().q_minus == 2.0);
  CHECK(std::isinf(sobolev_critical_exponent(2.0, 0.5)));
  CHECK(sobolev_critical_exponent(2.0, 0.25) == doctest::Approx(4.0));
}

TEST_CASE("structural gates") {
  CHECK_FALSE(problems_of("g.q = 1.0\n").empty());
  CHECK(problems_of("p = 1.5\ng.q = 2\n").empty());
  CHECK_FALSE(problems_of("p = 0.9\n").empty());
  CHECK_FALSE(problems_of("p = 3\ng.q = 4\n").empty());
  CHECK_FALSE(problems_of("frac.s = 1.2\n").empty());
  CHECK_FALSE(problems_of("domain.m = 3\n").empty());
  CHECK_FALSE(problems_of("domain.m = 8\ndomain.pad = 4\n").empty());
  // s q- < 1 makes the critical exponent finite: 2/(1 - 0.25*2) = 4 <= p+1.
  CHECK_FALSE(problems_of("frac.s = 0.25\np = 3\ng.q = 2\n").empty());
  CHECK(problems_of("g.kind = power_sum\ng.q1 = 2\ng.q2 = 3\n").empty());
}

TEST_CASE("every problem is reported at once") {
  const auto probs = problems_of("bogus = 1\np = abc\nfrac.s = 2\np = 3\nevolve.scheme = rk4\nnot a pair\n");
  CHECK(probs.size() >= 5u);
}

TEST_CASE("warnings do not block loading") {
  const auto cfg = parse_config("frac.s = 0.25\np = 2.5\ng.q = 2\nevolve.dt = 0.5\n");
  bool dt_warned = false;
  for (const auto& w : cfg.warnings) dt_warned = dt_warned || w.find("evolve.dt") != std::string::npos;
  CHECK(dt_warned);
  bool range_warned = false;
  const auto hot = parse_config("frac.s = 0.3\np = 5\ng.q = 3.3\n");
  for (const auto& w : hot.warnings) range_warned = range_warned || w.find("local existence") != std::string::npos;
  CHECK(range_warned);
}

TEST_CASE("custom and power_log kinds load") {
  const auto c = parse_config("g.kind = custom\ng.table = 1:2, 2:5, 4:12\np = 3.5\n");
  CHECK(c.problem.G.kind() == NKind::Custom);
  CHECK_FALSE(problems_of("g.kind = custom\ng.table = 1;2\n").empty());
  const auto pl = parse_config("g.kind = power_log\ng.q = 3\np = 4.5\n");
  CHECK(pl.problem.G.kind() == NKind::PowerLog);
}

TEST_CASE("initial data") {
  auto cfg = parse_config("domain.m = 8\ninitial.kind = gaussian\ninitial.scale = 2\ninitial.phase = 0.5\n");
  const Field g = make_initial(cfg);
  CHECK(g.values.cwiseAbs().maxCoeff() <= 2.0);
  CHECK(std::arg(g.values[3]) == doctest::Approx(0.5));
  cfg.initial.kind = InitialKind::Hat;
  CHECK(make_initial(cfg).values.imag().norm() == 0.0);
  cfg.initial.kind = InitialKind::RandomSmooth;
  CHECK(make_initial(cfg).values == make_initial(cfg).values);
  CHECK(make_initial(cfg).values.cwiseAbs().maxCoeff() == doctest::Approx(2.0));

  const auto dir = scratch("initial");
  write_snapshot(dir / "u0.txt", {0.0, g});
  cfg.initial.kind = InitialKind::FromFile;
  cfg.initial.path = "u0.txt";
  CHECK(make_initial(cfg, dir).values == g.values);
}

TEST_CASE("file round trips") {
  const auto dir = scratch("roundtrip");
  const auto cfg = parse_config(kSmall);
  const auto res = run_simulate(cfg, dir);
  CHECK(trace_csv(read_trace_csv(dir / "trace.csv")) == read_text(dir / "trace.csv"));
  const auto snap = read_snapshot(dir / "final.txt");
  CHECK(snap.u.values == res.trajectory.final_field.values);
  CHECK(read_report(dir / "report.txt") == res.report);

  const auto wells = run_wells(cfg, dir);
  const auto curve = read_d_curve_csv(dir / "d_curve.csv");
  CHECK(curve.size() >= 8u);
  write_d_curve_csv(dir / "again.csv", curve);
  CHECK(read_text(dir / "again.csv") == read_text(dir / "d_curve.csv"));
  CHECK(read_report(dir / "wells.txt") == wells);
  CHECK(read_text(dir / "d_curve.csv").rfind("delta,d_of_delta\n", 0) == 0);
  CHECK(read_text(dir / "trace.csv").rfind("t,J,I,l2h,lp1,ut_l2h,diss,F,drift\n", 0) == 0);

  CHECK_THROWS_AS(read_trace_csv(dir / "missing.csv"), IoError);
  write_text(dir / "bad.csv", "t,J\n1,2\n");
  CHECK_THROWS_AS(read_trace_csv(dir / "bad.csv"), IoError);
}

TEST_CASE("deterministic runs are byte-identical") {
  auto cfg = parse_config(kSmall);
  cfg.deterministic = true;
  const auto a = scratch("det_a"), b = scratch("det_b");
  run_simulate(cfg, a);
  run_simulate(cfg, b);
  CHECK(read_text(a / "trace.csv") == read_text(b / "trace.csv"));
  CHECK(read_text(a / "report.txt") == read_text(b / "report.txt"));
}

TEST_CASE("subcommands and exit codes") {
  const auto dir = scratch("exit");
  write_text(dir / "ok.cfg", kSmall);
  write_text(dir / "bad.cfg", "p = 0.5\nfoo = 1\n");
  std::ostringstream out, err;
  auto call = [&](std::string sub, std::optional<fs::path> config, std::optional<fs::path> trace = {}) {
    CliOptions o;
    o.subcommand = std::move(sub);
    o.config = std::move(config);
    o.trace = std::move(trace);
    o.out = dir / "out";
    o.deterministic = true;
    return run_cli(o, out, err);
  };
  CHECK(call("simulate", dir / "ok.cfg") == kExitOk);
  CHECK(read_report(dir / "out" / "report.txt").size() > 10u);
  CHECK(call("analyze", dir / "ok.cfg", dir / "out" / "trace.csv") == kExitOk);
  CHECK(fs::exists(dir / "out" / "analyze.txt"));
  CHECK(call("groundstate", dir / "ok.cfg") == kExitOk);
  CHECK(fs::exists(dir / "out" / "u_star.txt"));
  CHECK(call("wells", dir / "ok.cfg") == kExitOk);
  CHECK(call("simulate", dir / "bad.cfg") == kExitConfig);
  CHECK(err.str().find("foo") != std::string::npos);
  CHECK(call("simulate", dir / "nope.cfg") == kExitIo);
  CHECK(call("analyze", dir / "ok.cfg", dir / "nope.csv") == kExitIo);
  CHECK(call("simulate", std::nullopt) == kExitConfig);
  CHECK(call("explode", dir / "ok.cfg") == kExitConfig);
}

TEST_CASE("simulate statuses") {
  const auto dir = scratch("status");
  auto cfg = parse_config(kSmall);
  CHECK(run_simulate(cfg, dir).trajectory.status == RunStatus::Completed);
  cfg.initial.scale = 1.0;
  cfg.evolve.t_end = 5.0;
  const auto v = run_simulate(cfg, dir);
  CHECK(v.trajectory.status == RunStatus::BlowupDetected);
  bool has_verdict = false;
  for (const auto& [k, val] : v.report)
    if (k == "blowup.detected") has_verdict = val == "true";
  CHECK(has_verdict);
}

TEST_CASE("verify suite passes on the default configuration") {
  for (const auto& r : verify_suite(RunConfig{})) {
    INFO(r.name << ": " << r.detail);
    CHECK(r.pass);
  }
}
