#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracwell/nfunc.hpp"
#include "fracwell/rng.hpp"
#include "oracle.hpp"

using namespace fracwell;

TEST_CASE("evaluation of G") {
  CHECK(NFunction::power(2).G(3.0) == doctest::Approx(9.0));
  for (const auto& G : {NFunction::power(2), NFunction::power_sum(2, 4), NFunction::power_log(3),
                        NFunction::custom({1.0, 2.0}, {2.0, 5.0})})
    CHECK(G.G(0.0) == 0.0);
  for (double q : {1.5, 2.0, 3.7}) CHECK(NFunction::power(q).G(1.0) == 1.0);
  CHECK(NFunction::power(2).normalized());
  CHECK_THROWS_AS(NFunction::power(2).G(-1.0), DomainError);
}

TEST_CASE("custom G integrates the tabulated g") {
  const auto G = NFunction::custom({1.0, 2.0, 4.0}, {1.0, 3.0, 4.0});
  const auto g = [&](double t) { return G.g(t); };
  for (double t : {0.3, 1.0, 1.7, 3.2, 6.0})
    CHECK(G.G(t) == doctest::Approx(oracle::simpson(g, 0.0, t, 4000)).epsilon(1e-6));
}

TEST_CASE("exponent bounds") {
  const auto p3 = NFunction::power(3).bounds();
  CHECK(p3.q_minus == 3.0);
  CHECK(p3.q_plus == 3.0);

  const auto ps = NFunction::power_sum(2, 4).bounds();
  const auto [lo, hi] = oracle::scan_ratio(oracle::power_sum_G(2, 4), oracle::power_sum_g(2, 4), 1e-6, 1e6, 20000);
  CHECK(ps.q_minus == doctest::Approx(lo).epsilon(1e-6));
  CHECK(ps.q_plus == doctest::Approx(hi).epsilon(1e-6));

  // t g/G = q + sign(ln t)/(|ln t|+1) for t^q(|ln t|+1): inf q-1 and sup q+1, approached at t -> 1.
  const auto pl = NFunction::power_log(3).bounds();
  CHECK(pl.q_minus >= 2.0 - 1e-12);
  CHECK(pl.q_plus <= 4.0 + 1e-12);
  CHECK(pl.q_minus < 2.0 + 5e-3);
  CHECK(pl.q_plus > 4.0 - 5e-3);
}

TEST_CASE("audit flags a g that is not an N-function slope") {
  CHECK(audit(NFunction::power(2)).valid);
  CHECK(audit(NFunction::power_sum(2, 4)).valid);
  CHECK_THROWS(NFunction::power(0.5));
}

TEST_CASE("inverses") {
  for (const auto& G : {NFunction::power(2.5), NFunction::power_sum(2, 4), NFunction::power_log(3)}) {
    for (double y : {1e-4, 0.3, 1.0, 7.0, 1e4}) {
      CHECK(G.G(G.G_inverse(y)) == doctest::Approx(y).epsilon(1e-10));
      CHECK(G.g(G.g_inverse(y)) == doctest::Approx(y).epsilon(1e-10));
    }
  }
}

TEST_CASE("complementary function") {
  const auto G2 = NFunction::power(2);
  for (double s : {0.1, 1.0, 3.0}) CHECK(G2.G_tilde(s) == doctest::Approx(s * s / 4.0).epsilon(1e-12));
  for (double q : {1.5, 2.0, 3.0}) {
    const auto G = NFunction::power(q);
    for (double s : {0.2, 1.0, 2.5}) CHECK(std::abs(conjugate_by_sup(G, s) - G.G_tilde(s)) < 1e-8);
  }
  const auto ps = NFunction::power_sum(2, 4);
  for (double s : {0.5, 2.0, 9.0})
    CHECK(ps.G_tilde(s) == doctest::Approx(oracle::conjugate_sup(oracle::power_sum_G(2, 4), s, 10.0)).epsilon(1e-9));
}

TEST_CASE("power comparison") {
  CHECK(power_comparison_check(NFunction::power(2), 0.5, 1.0));
  for (double b : {0.1, 1.0, 10.0}) CHECK(power_comparison_check(NFunction::power_sum(2, 4), 1.0, b));
  Rng rng(7);
  const auto G = NFunction::power_sum(2, 4);
  for (int k = 0; k < 100; ++k) CHECK(power_comparison_check(G, rng.log_uniform(1e-3, 1e3), rng.log_uniform(1e-3, 1e3)));
}

TEST_CASE("Luxemburg norm") {
  const std::vector<double> v{5.0}, w{1.0};
  CHECK(luxemburg_norm(v, w, NFunction::power(2)) == doctest::Approx(5.0).epsilon(1e-12));
  const std::vector<double> zero{0.0, 0.0}, w2{1.0, 1.0};
  CHECK(luxemburg_norm(zero, w2, NFunction::power(2)) == 0.0);

  Rng rng(3);
  for (const auto& G : {NFunction::power(3), NFunction::power_sum(2, 4), NFunction::power_log(3)}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> vals(30), wts(30);
      for (std::size_t k = 0; k < vals.size(); ++k) {
        vals[k] = rng.log_uniform(1e-3, 1e2);
        wts[k] = rng.uniform(0.01, 0.1);
      }
      const double lam = luxemburg_norm(vals, wts, G);
      double mod = 0.0;
      for (std::size_t k = 0; k < vals.size(); ++k) mod += wts[k] * G.G(vals[k] / lam);
      CHECK(std::abs(mod - 1.0) < 1e-10);
      CHECK(lam == doctest::Approx(oracle::luxemburg(vals, wts, [&](double t) { return G.G(t); })).epsilon(1e-10));
    }
  }
  const std::vector<double> bad{NAN};
  CHECK_THROWS_AS(luxemburg_norm(bad, w, NFunction::power(2)), DomainError);
}

TEST_CASE("zeta sandwich") {
  const auto G2 = NFunction::power(2);
  CHECK(zeta_sandwich_check(1.0, 1.0, G2));
  CHECK_FALSE(zeta_sandwich_check(1.1, 1.0, G2));
  CHECK(zeta_sandwich_check(0.49, 0.7, G2));
  CHECK_FALSE(zeta_sandwich_check(0.5, 0.7, G2));

  Rng rng(11);
  const auto G = NFunction::power_sum(2, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> vals(16), wts(16, 0.05);
    for (auto& x : vals) x = rng.log_uniform(1e-2, 1e2);
    const double norm = luxemburg_norm(vals, wts, G);
    double mod = 0.0;
    for (std::size_t k = 0; k < vals.size(); ++k) mod += wts[k] * G.G(vals[k]);
    CHECK(zeta_sandwich_check(mod, norm, G));
  }
}

TEST_CASE("Young and conjugate bound on a 100 x 100 grid") {
  for (const auto& G : {NFunction::power(2), NFunction::power(3), NFunction::power_sum(2, 4)}) {
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
      const double t = std::pow(10.0, -3.0 + 6.0 * i / 99.0);
      bad += !conjugate_bound_check(G, t);
      for (int j = 0; j < 100; ++j) bad += !young_check(G, std::pow(10.0, -3.0 + 6.0 * j / 99.0), t);
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("Sobolev conjugate") {
  for (double q : {1.5, 2.0}) {
    const double s = 0.3;
    const auto G = NFunction::power(q);
    for (double t : {0.1, 1.0, 5.0}) {
      const double exact = std::pow(t, 1.0 / q - s) / (1.0 / q - s);
      CHECK(std::abs(sobolev_conjugate_inv(G, t, s) - exact) < 1e-6 * exact);
    }
    CHECK(sobolev_conjugate_inv(G, 0.0, s) == 0.0);
  }
  CHECK_FALSE(sobolev_integrable(NFunction::power(2), 0.5));
  CHECK_THROWS_AS(sobolev_conjugate_inv(NFunction::power(2), 1.0, 0.5), HypothesisViolation);
  const auto Gstar = sobolev_conjugate(NFunction::power(2), 0.3);
  CHECK(sobolev_conjugate_inv(NFunction::power(2), Gstar(0.8), 0.3) == doctest::Approx(0.8).epsilon(1e-8));
}

TEST_CASE("Orlicz Hoelder") {
  const auto G = NFunction::power(2);
  const std::vector<double> zero(5, 0.0), w(5, 0.2), m(5, 1.3);
  CHECK(holder_orlicz_check(m, zero, w, G));
  const std::vector<double> one_m{2.0}, one_f{3.0}, one_w{0.5};
  CHECK(holder_orlicz_check(one_m, one_f, one_w, G));
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(12), b(12), wt(12);
    for (std::size_t k = 0; k < a.size(); ++k) {
      a[k] = rng.log_uniform(1e-2, 1e2);
      b[k] = rng.log_uniform(1e-2, 1e2);
      wt[k] = rng.uniform(0.01, 1.0);
    }
    CHECK(holder_orlicz_check(a, b, wt, G));
  }
}

TEST_CASE("essentially stronger") {
  const auto Gstar = sobolev_conjugate(NFunction::power(2), 0.3);
  CHECK(ess_stronger_check([](double t) { return std::pow(t, 4.0); }, Gstar, 1.0));
  const auto sq = [](double t) { return t * t; };
  CHECK_FALSE(ess_stronger_check(sq, sq, 2.0));
  CHECK(ess_stronger_check(sq, [](double t) { return t * t * t; }, 3.0));
}

TEST_CASE("(H3) convexity of G(sqrt t)") {
  CHECK(sqrt_convexity_check(NFunction::power(2)));
  CHECK(sqrt_convexity_check(NFunction::power_sum(2, 4)));
  CHECK_FALSE(sqrt_convexity_check(NFunction::power(1.5)));
}
