#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "fracwell/errors.hpp"
#include "fracwell/functionals.hpp"
#include "fracwell/grid.hpp"
#include "fracwell/rng.hpp"
#include "oracle.hpp"

using namespace fracwell;

namespace {

Field random_field(const Domain1D& d, Rng& rng) {
  Eigen::VectorXcd v(d.m);
  for (int i = 0; i < d.m; ++i) v[i] = Complex(rng.normal(), rng.normal());
  return Field(d, v);
}

std::vector<oracle::Complex> as_vector(const Field& u) { return {u.values.data(), u.values.data() + u.size()}; }

}  // namespace

TEST_CASE("pair set covers Q once per unordered pair") {
  const Domain1D d{-1.0, 1.0, 2, 2};
  const auto t = build_kernel(d, 0.5, {});
  // 6 padded nodes: C(6,2) unordered pairs minus C(4,2) exterior-exterior ones.
  CHECK(t.pairs.size() == 15u - 6u);
  std::set<std::pair<int, int>> seen;
  for (const auto& p : t.pairs) {
    CHECK(p.i >= 0);
    CHECK(p.i < d.m);
    CHECK(p.weight > 0.0);
    CHECK(std::isfinite(p.weight));
    if (p.j >= 0) {
      CHECK(p.j > p.i);
      CHECK(seen.insert({p.i, p.j}).second);
    }
  }
}

TEST_CASE("kernel mass matches a direct double sum") {
  const Domain1D d{-1.0, 1.0, 8, 8};
  const auto t = build_kernel(d, 0.5, {});
  const oracle::Grid g{d.a, d.b, d.m, d.pad};
  double direct = 0.0;
  for (int k = 0; k < g.total(); ++k)
    for (int l = 0; l < g.total(); ++l)
      if (k != l && (g.interior(k) || g.interior(l))) direct += g.h() * g.h() / std::abs(g.x(k) - g.x(l));
  CHECK(t.kernel_mass() == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("invalid fractional order is a configuration error") {
  const Domain1D d{-1.0, 1.0, 8, 8};
  CHECK_THROWS_AS(build_kernel(d, 0.0, {}), ConfigError);
  CHECK_THROWS_AS(build_kernel(d, 1.0, {}), ConfigError);
}

TEST_CASE("covariant quotient reduces to the plain one without a field") {
  Rng rng(1);
  const Domain1D d{-1.0, 1.0, 8, 8};
  const auto t0 = build_kernel(d, 0.4, {});
  const Field u = random_field(d, rng);
  const auto a = covariant_quotient(u, t0), b = plain_quotient(u, t0);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) == 0.0);

  Eigen::VectorXcd re(d.m);
  for (int i = 0; i < d.m; ++i) re[i] = rng.normal();
  const auto c = covariant_quotient(Field(d, re), t0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto& p = t0.pairs[k];
    const double uj = p.j >= 0 ? re[p.j].real() : 0.0;
    const double r = std::abs(d.interior_node(p.i) - (p.j >= 0 ? d.interior_node(p.j) : 0.0));
    if (p.j >= 0) CHECK(c[k].real() == doctest::Approx((re[p.i].real() - uj) / std::pow(r, 0.4)).epsilon(1e-13));
    CHECK(c[k].imag() == 0.0);
  }
}

TEST_CASE("global phase leaves quotient magnitudes unchanged") {
  Rng rng(2);
  const Domain1D d{-1.0, 1.0, 8, 8};
  const auto t = build_kernel(d, 0.6, {MagneticKind::Linear, 1.7});
  const Field u = random_field(d, rng);
  const Field v(d, u.values * std::polar(1.0, 0.83));
  const auto a = covariant_quotient(u, t), b = covariant_quotient(v, t);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(std::abs(a[k]) - std::abs(b[k])) < 1e-13 * (1.0 + std::abs(a[k])));
}

TEST_CASE("hat function on four nodes") {
  // a = 0, b = 5: h = 1, nodes x = 1..4, hat values 1, 2, 2, 1 (unnormalized).
  const Domain1D d{0.0, 5.0, 4, 4};
  Eigen::VectorXcd v(4);
  v << 1.0, 2.0, 2.0, 1.0;
  const auto t = build_kernel(d, 0.5, {});
  const auto q = plain_quotient(Field(d, v), t);
  int checked = 0;
  for (std::size_t k = 0; k < t.pairs.size(); ++k) {
    const auto& p = t.pairs[k];
    if (p.j < 0) continue;
    // Interior pairs (i, j) with x = i + 1: the six quotients by hand.
    const double expect[4][4] = {{0, -1.0, -1.0 / std::sqrt(2.0), 0.0},
                                 {0, 0, 0.0, 1.0 / std::sqrt(2.0)},
                                 {0, 0, 0, 1.0},
                                 {0, 0, 0, 0}};
    CHECK(q[k].real() == doctest::Approx(expect[p.i][p.j]).epsilon(1e-14));
    ++checked;
  }
  CHECK(checked == 6);
}

TEST_CASE("exterior pairs carry the boundary coupling") {
  const Domain1D d{-1.0, 1.0, 6, 6};
  const auto t = build_kernel(d, 0.5, {});
  const Field one(d, Eigen::VectorXcd::Ones(d.m));
  const auto q = plain_quotient(one, t);
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (t.pairs[k].j >= 0) CHECK(q[k] == Complex{});
    else CHECK(std::abs(q[k]) > 0.0);
  }
}

TEST_CASE("fractional stiffness") {
  const Domain1D d{-1.0, 1.0, 8, 8};
  const auto t = build_kernel(d, 0.3, {MagneticKind::Constant, 2.0});
  const Eigen::MatrixXd L = assemble_fractional_stiffness(t);
  CHECK((L - L.transpose()).norm() == 0.0);
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(L).eigenvalues().minCoeff() > 0.0);
  CHECK(L.rowwise().sum().minCoeff() > 0.0);

  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(d.m);
  CHECK((zero.adjoint() * L * zero)(0, 0).real() == 0.0);

  Eigen::VectorXcd bump = Eigen::VectorXcd::Zero(d.m);
  bump[3] = Complex(0.7, -0.2);
  const oracle::Grid g{d.a, d.b, d.m, d.pad};
  const auto ref = oracle::direct_sums(g, {bump.data(), bump.data() + d.m}, 0.3, 3.0,
                                       [](double) { return 0.0; }, oracle::power_G(2), oracle::power_g(2));
  CHECK((bump.adjoint() * L * bump)(0, 0).real() == doctest::Approx(ref.seminorm2).epsilon(1e-12));
}

TEST_CASE("modular and seminorm match the direct loop") {
  Rng rng(9);
  for (const MagneticField A : {MagneticField{MagneticKind::Zero, 0.0}, MagneticField{MagneticKind::Constant, 1.1},
                                MagneticField{MagneticKind::Linear, -0.6}}) {
    ProblemParams pp;
    pp.domain = {-1.0, 1.0, 7, 7};
    pp.s = 0.35;
    pp.magnetic = A;
    const Model model(pp, Exec::Serial);
    const oracle::Grid g{-1.0, 1.0, 7, 7};
    for (int k = 0; k < 5; ++k) {
      const Field u = random_field(pp.domain, rng);
      const auto ref = oracle::direct_sums(g, as_vector(u), pp.s, pp.p, [A](double x) { return A(x); },
                                           oracle::power_G(2), oracle::power_g(2));
      const auto e = energy_report(u, model, ReportDetail::Scalars);
      CHECK(e.rho_A == doctest::Approx(ref.modular).epsilon(1e-12));
      CHECK(e.seminorm2 == doctest::Approx(ref.seminorm2).epsilon(1e-12));
    }
  }
}

TEST_CASE("refinement convergence of the modular") {
  std::vector<double> rho;
  for (int m : {15, 31, 63, 127}) {
    ProblemParams pp;
    pp.domain = {-1.0, 1.0, m, m};
    pp.s = 0.25;
    const Model model(pp, Exec::Serial);
    Eigen::VectorXcd v(m);
    for (int i = 0; i < m; ++i) {
      const double x = pp.domain.interior_node(i);
      v[i] = (1.0 - x * x) * (1.0 - x * x);
    }
    rho.push_back(energy_report(Field(pp.domain, v), model, ReportDetail::Scalars).rho_A);
  }
  const double d1 = std::abs(rho[1] - rho[0]), d2 = std::abs(rho[2] - rho[1]), d3 = std::abs(rho[3] - rho[2]);
  CHECK(d2 < d1);
  CHECK(d3 < d2);
}
