#include "fracwell/grid.hpp"

#include <cmath>
#include <string>

#include "fracwell/errors.hpp"

namespace fracwell {

void Domain1D::validate() const {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw ContractError("domain needs finite a < b");
  if (m < 1) throw ContractError("domain needs at least one interior node");
  if (pad < 0) throw ContractError("domain padding must be nonnegative");
}

Field::Field(Domain1D d, Eigen::VectorXcd v) : domain(d), values(std::move(v)) {
  if (values.size() != domain.m) throw ContractError("field length does not match the domain");
}

Field Field::zeros(const Domain1D& d) { return Field(d, Eigen::VectorXcd::Zero(d.m)); }

double KernelTable::kernel_mass() const {
  double acc = 0.0;
  for (const auto& p : pairs) acc += p.weight;
  return 2.0 * acc;
}

KernelTable build_kernel(const Domain1D& domain, double s, const MagneticField& A) {
  domain.validate();
  if (!(s > 0.0 && s < 1.0)) throw ConfigError({"frac.s must lie in (0,1), got " + std::to_string(s)});
  KernelTable t;
  t.domain = domain;
  t.s = s;
  t.magnetic = A;
  const double h = domain.h();
  const int n = domain.total_nodes();
  auto add = [&](int ki, int kj, int i, int j) {
    const double xi = domain.node(ki);
    const double xj = domain.node(kj);
    const double r = std::abs(xi - xj);
    const double phi = (xi - xj) * A(0.5 * (xi + xj));
    t.pairs.push_back({i, j, h * h / r, std::pow(r, -s), std::pow(r, -2.0 * s), std::polar(1.0, phi)});
  };
  for (int ki = domain.pad; ki < domain.pad + domain.m; ++ki) {
    const int i = ki - domain.pad;
    for (int kj = ki + 1; kj < domain.pad + domain.m; ++kj) add(ki, kj, i, kj - domain.pad);
    for (int kj = 0; kj < n; ++kj)
      if (!domain.is_interior(kj)) add(ki, kj, i, -1);
  }
  // CSR incidence over interior nodes.
  t.offsets.assign(static_cast<std::size_t>(domain.m) + 1, 0);
  for (const auto& p : t.pairs) {
    ++t.offsets[static_cast<std::size_t>(p.i) + 1];
    if (p.j >= 0) ++t.offsets[static_cast<std::size_t>(p.j) + 1];
  }
  for (int i = 0; i < domain.m; ++i) t.offsets[static_cast<std::size_t>(i) + 1] += t.offsets[static_cast<std::size_t>(i)];
  t.incidence.resize(static_cast<std::size_t>(t.offsets.back()));
  std::vector<int> fill(t.offsets.begin(), t.offsets.end() - 1);
  for (int k = 0; k < static_cast<int>(t.pairs.size()); ++k) {
    const auto& p = t.pairs[static_cast<std::size_t>(k)];
    t.incidence[static_cast<std::size_t>(fill[static_cast<std::size_t>(p.i)]++)] = {k, true};
    if (p.j >= 0) t.incidence[static_cast<std::size_t>(fill[static_cast<std::size_t>(p.j)]++)] = {k, false};
  }
  return t;
}

void require_same_grid(const Field& u, const KernelTable& table) {
  if (!(u.domain == table.domain) || u.values.size() != table.domain.m)
    throw ContractError("field and kernel table live on different grids");
}

std::vector<Complex> covariant_quotient(const Field& u, const KernelTable& table) {
  require_same_grid(u, table);
  std::vector<Complex> out(table.pairs.size());
  for (std::size_t k = 0; k < table.pairs.size(); ++k) {
    const auto& p = table.pairs[k];
    const Complex uj = p.j >= 0 ? p.phase * u.values[p.j] : Complex{};
    out[k] = (u.values[p.i] - uj) * p.inv_rs;
  }
  return out;
}

std::vector<Complex> plain_quotient(const Field& u, const KernelTable& table) {
  require_same_grid(u, table);
  std::vector<Complex> out(table.pairs.size());
  for (std::size_t k = 0; k < table.pairs.size(); ++k) {
    const auto& p = table.pairs[k];
    const Complex uj = p.j >= 0 ? u.values[p.j] : Complex{};
    out[k] = (u.values[p.i] - uj) * p.inv_rs;
  }
  return out;
}

Eigen::MatrixXd assemble_fractional_stiffness(const KernelTable& table) {
  const int m = table.domain.m;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  for (const auto& p : table.pairs) {
    const double c = 2.0 * p.weight * p.inv_r2s;
    L(p.i, p.i) += c;
    if (p.j >= 0) {
      L(p.j, p.j) += c;
      L(p.i, p.j) -= c;
      L(p.j, p.i) -= c;
    }
  }
  return L;
}

}  // namespace fracwell
