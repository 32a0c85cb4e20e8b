#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracwell/analyze.hpp"

using namespace fracwell;

namespace {

ProblemParams wide(int m) {
  ProblemParams pp;
  pp.domain = {-200.0, 200.0, m, m};
  return pp;
}

Field bump(const Domain1D& d, double scale, double phase = 0.0) {
  Eigen::VectorXcd v(d.m);
  const double c = 0.5 * (d.a + d.b), w = 0.125 * (d.b - d.a);
  for (int i = 0; i < d.m; ++i) {
    const double xi = (d.interior_node(i) - c) / w;
    v[i] = scale * std::exp(-xi * xi) * std::polar(1.0, phase);
  }
  return Field(d, v);
}

WellOptions quick_wells() {
  WellOptions wo;
  wo.trials = 50;
  wo.climb_starts = 2;
  wo.climb_iters = 60;
  wo.delta_points = 16;
  return wo;
}

struct Fixture {
  Model model{wide(32)};
  WellConstants wells = well_constants(model, quick_wells());
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

Trajectory run(double scale, double t_end, int snapshot_every = 0) {
  StepperOptions so;
  so.dt = 1e-3;
  so.t_end = t_end;
  so.record_every = 20;
  so.snapshot_every = snapshot_every;
  return evolve(bump(fixture().model.domain(), scale), fixture().model, so);
}

}  // namespace

TEST_CASE("line fit") {
  const auto f = fit_line({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_line({1.0}, {2.0}), ContractError);
}

TEST_CASE("decay verdict on a W-type run") {
  const auto& fx = fixture();
  const auto e0 = energy_report(bump(fx.model.domain(), 0.05), fx.model);
  REQUIRE(e0.J < fx.wells.M_const);
  REQUIRE(e0.I > 0.0);
  const auto tr = run(0.05, 2.0);
  REQUIRE(tr.status == RunStatus::Completed);
  const auto v = verify_decay(tr.trace, fx.wells);
  CHECK(v.applicable);
  CHECK(v.monotone);
  CHECK(v.strictly_decreasing);
  CHECK(v.fit_r2 > 0.99);
  CHECK(v.fit_rate < 0.0);
  CHECK(v.bracket_ok);
  CHECK(v.comparable_ok);
  CHECK_FALSE(v.comparable_from_l2h);
  const double bound = 2.0 * 4.0 / 2.0 * e0.J;
  for (const auto& r : tr.trace) CHECK(r.pairing() < bound);
  CHECK_FALSE(detect_blowup(tr.trace, 3.0).detected);
}

TEST_CASE("decay verdict on the zero solution") {
  const auto& fx = fixture();
  const auto tr = run(0.0, 0.2);
  const auto v = verify_decay(tr.trace, fx.wells);
  CHECK(v.monotone);
  CHECK(v.fit_rate == 0.0);
}

TEST_CASE("bracket fails above the well") {
  const auto& fx = fixture();
  // A record whose pairing sits far above h(1) violates the bracket.
  Trace tr;
  for (int k = 0; k < 4; ++k) {
    TraceRecord r;
    r.t = k;
    r.l2h = 10.0 - k;
    r.lp1 = 1.0;
    r.I = 1e4;
    r.J = 2.0 * fx.wells.M_const;
    tr.push_back(r);
  }
  const auto v = verify_decay(tr, fx.wells);
  CHECK_FALSE(v.applicable);
  CHECK_FALSE(v.bracket_ok);
}

TEST_CASE("blowup verdict on a V-type run") {
  const auto& fx = fixture();
  const auto e0 = energy_report(bump(fx.model.domain(), 1.0), fx.model);
  REQUIRE(e0.I < 0.0);
  REQUIRE(e0.J < fx.wells.M_const);
  const auto tr = run(1.0, 5.0);
  CHECK(tr.status == RunStatus::BlowupDetected);
  const auto v = detect_blowup(tr.trace, 3.0, tr.overflow);
  CHECK(v.detected);
  CHECK(v.conclusive);
  CHECK(v.theta == 0.5);
  CHECK(v.I_always_negative);
  CHECK(v.xi_min > 0.0);
  CHECK(v.xi_min >= 2.0 * 4.0 * (fx.wells.M_const - e0.J) * (1.0 - 1e-9));
  CHECK(v.cauchy_schwarz_ok);
  CHECK(std::isfinite(v.t_blow_est));
  CHECK(v.t_blow_est > tr.trace.front().t);
  const double floor = 2.0 * 4.0 / 2.0 * fx.wells.M_const;
  for (const auto& r : tr.trace) CHECK(r.pairing() > floor);
}

TEST_CASE("second derivative of F follows -2I") {
  const auto tr = run(0.05, 1.0);
  CHECK(detect_blowup(tr.trace, 3.0).concavity_residual < 1e-2);
}

TEST_CASE("short traces are inconclusive") {
  const auto tr = run(0.05, 0.1);
  REQUIRE(tr.trace.size() < 10);
  CHECK_FALSE(detect_blowup(tr.trace, 3.0).conclusive);
  CHECK_THROWS_AS(detect_blowup(tr.trace, 1.0), ContractError);
}

TEST_CASE("ground state") {
  ProblemParams pp;
  pp.domain = {-1.0, 1.0, 24, 24};
  const Model model(pp);
  const auto gs = ground_state_solve(model, bump(pp.domain, 1.0, 0.4), 5000, 1e-9);
  CHECK(gs.converged);
  CHECK(gs.dual_residual < 1e-6);
  const auto e = energy_report(gs.u_star, model);
  CHECK(gs.nehari_residual < 1e-6 * e.pairing);
  const auto w = well_constants(model, quick_wells());
  CHECK(gs.J_star >= w.d_est * (1.0 - 1e-3));
  // Undo the seed's phase: what is left must be real.
  const Eigen::VectorXcd rotated = gs.u_star.values * std::polar(1.0, -0.4);
  CHECK(rotated.imag().norm() < 1e-9 * rotated.norm());
}

TEST_CASE("omega-limit report") {
  ProblemParams pp;
  pp.domain = {-1.0, 1.0, 16, 16};
  const Model model(pp);
  const auto gs = ground_state_solve(model, bump(pp.domain, 1.0), 5000, 1e-10);
  REQUIRE(gs.converged);

  CHECK(omega_limit_check({}, gs, model).empty);

  // Starting at u_star the distances stay at the scheme-error level.
  StepperOptions so;
  so.dt = 1e-3;
  so.t_end = 0.2;
  so.record_every = 20;
  so.snapshot_every = 1;
  const auto still = evolve(gs.u_star, model, so);
  const auto rs = omega_limit_check(still.snapshots, gs, model);
  for (double d : rs.dist_ground) CHECK(d < 1e-6);
  CHECK(rs.selected == "u_star");

  const auto& fx = fixture();
  const auto tr = run(0.05, 2.0, 5);
  const auto rw = omega_limit_check(tr.snapshots, ground_state_solve(fx.model, bump(fx.model.domain(), 1.0), 2000), fx.model);
  CHECK_FALSE(rw.empty);
  CHECK(rw.J_monotone);
  CHECK(rw.limit_in_range);
  CHECK(rw.selected == "0");
  CHECK(rw.distance_trend_decreasing);
  CHECK(rw.dual_trend_decreasing);
}
