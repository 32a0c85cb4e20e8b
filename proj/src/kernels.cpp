#include "fracwell/kernels.hpp"

#include <cmath>
#include <vector>

#include "fracwell/errors.hpp"

namespace fracwell::kernels {

namespace {

Complex pair_quotient(std::span<const Complex> u, const PairEntry& p) {
  const Complex uj = p.j >= 0 ? p.phase * u[static_cast<std::size_t>(p.j)] : Complex{};
  return (u[static_cast<std::size_t>(p.i)] - uj) * p.inv_rs;
}

// 2 w g(|D|)/|D| r^{-s} D: the pair's contribution to the first node's gradient.
Complex pair_force(std::span<const Complex> u, const PairEntry& p, const NFunction& G) {
  const Complex d = pair_quotient(u, p);
  return 2.0 * p.weight * G.g_over_t(std::abs(d)) * p.inv_rs * d;
}

void check_sizes(std::span<const Complex> u, const KernelTable& t) {
  if (u.size() != static_cast<std::size_t>(t.domain.m)) throw ContractError("kernel: field size mismatch");
}

}  // namespace

namespace serial {

void quotients(std::span<const Complex> u, const KernelTable& t, std::span<Complex> out) {
  check_sizes(u, t);
  for (std::size_t k = 0; k < t.pairs.size(); ++k) out[k] = pair_quotient(u, t.pairs[k]);
}

void magnitudes(std::span<const Complex> d, std::span<double> out) {
  for (std::size_t k = 0; k < d.size(); ++k) out[k] = std::abs(d[k]);
}

PairSums pair_sums(std::span<const double> mags, const KernelTable& t, const NFunction& G, double scale) {
  double modular = 0.0, pairing = 0.0;
  for (std::size_t k = 0; k < t.pairs.size(); ++k) {
    const double x = scale * mags[k];
    const double w = t.pairs[k].weight;
    modular += w * G.G(x);
    pairing += w * G.g(x) * x;
  }
  return {2.0 * modular, 2.0 * pairing};
}

void modular_gradient(std::span<const Complex> u, const KernelTable& t, const NFunction& G,
                      std::span<Complex> grad) {
  check_sizes(u, t);
  for (auto& g : grad) g = Complex{};
  for (const auto& p : t.pairs) {
    const Complex f = pair_force(u, p, G);
    grad[static_cast<std::size_t>(p.i)] += f;
    if (p.j >= 0) grad[static_cast<std::size_t>(p.j)] -= std::conj(p.phase) * f;
  }
}

double nodal_power_sum(std::span<const Complex> u, double exponent) {
  double acc = 0.0;
  for (const auto& z : u) acc += std::pow(std::abs(z), exponent);
  return acc;
}

}  // namespace serial

namespace parallel {

void quotients(std::span<const Complex> u, const KernelTable& t, std::span<Complex> out) {
  check_sizes(u, t);
  const auto n = static_cast<long>(t.pairs.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = pair_quotient(u, t.pairs[static_cast<std::size_t>(k)]);
}

void magnitudes(std::span<const Complex> d, std::span<double> out) {
  const auto n = static_cast<long>(d.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = std::abs(d[static_cast<std::size_t>(k)]);
}

PairSums pair_sums(std::span<const double> mags, const KernelTable& t, const NFunction& G, double scale) {
  double modular = 0.0, pairing = 0.0;
  const auto n = static_cast<long>(t.pairs.size());
#pragma omp parallel for schedule(static) reduction(+ : modular, pairing)
  for (long k = 0; k < n; ++k) {
    const double x = scale * mags[static_cast<std::size_t>(k)];
    const double w = t.pairs[static_cast<std::size_t>(k)].weight;
    modular += w * G.G(x);
    pairing += w * G.g(x) * x;
  }
  return {2.0 * modular, 2.0 * pairing};
}

void modular_gradient(std::span<const Complex> u, const KernelTable& t, const NFunction& G,
                      std::span<Complex> grad) {
  check_sizes(u, t);
  std::vector<Complex> force(t.pairs.size());
  const auto n = static_cast<long>(t.pairs.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < n; ++k) force[static_cast<std::size_t>(k)] = pair_force(u, t.pairs[static_cast<std::size_t>(k)], G);
  // Gather per node so no two threads write the same entry.
  const int m = t.domain.m;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    Complex acc{};
    for (int e = t.offsets[static_cast<std::size_t>(i)]; e < t.offsets[static_cast<std::size_t>(i) + 1]; ++e) {
      const auto& inc = t.incidence[static_cast<std::size_t>(e)];
      const auto pk = static_cast<std::size_t>(inc.pair);
      if (inc.first) acc += force[pk];
      else acc -= std::conj(t.pairs[pk].phase) * force[pk];
    }
    grad[static_cast<std::size_t>(i)] = acc;
  }
}

double nodal_power_sum(std::span<const Complex> u, double exponent) {
  double acc = 0.0;
  const auto n = static_cast<long>(u.size());
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (long k = 0; k < n; ++k) acc += std::pow(std::abs(u[static_cast<std::size_t>(k)]), exponent);
  return acc;
}

}  // namespace parallel

void quotients(Exec e, std::span<const Complex> u, const KernelTable& t, std::span<Complex> out) {
  e == Exec::Serial ? serial::quotients(u, t, out) : parallel::quotients(u, t, out);
}

void magnitudes(Exec e, std::span<const Complex> d, std::span<double> out) {
  e == Exec::Serial ? serial::magnitudes(d, out) : parallel::magnitudes(d, out);
}

PairSums pair_sums(Exec e, std::span<const double> mags, const KernelTable& t, const NFunction& G, double scale) {
  return e == Exec::Serial ? serial::pair_sums(mags, t, G, scale) : parallel::pair_sums(mags, t, G, scale);
}

void modular_gradient(Exec e, std::span<const Complex> u, const KernelTable& t, const NFunction& G,
                      std::span<Complex> grad) {
  e == Exec::Serial ? serial::modular_gradient(u, t, G, grad) : parallel::modular_gradient(u, t, G, grad);
}

double nodal_power_sum(Exec e, std::span<const Complex> u, double exponent) {
  return e == Exec::Serial ? serial::nodal_power_sum(u, exponent) : parallel::nodal_power_sum(u, exponent);
}

}  // namespace fracwell::kernels
