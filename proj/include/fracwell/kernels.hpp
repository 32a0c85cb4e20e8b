#pragma once

// Pair reductions over a KernelTable. Each kernel exists in a serial form
// (fixed summation order, bit-reproducible) and an OpenMP form.

#include <span>

#include "fracwell/grid.hpp"
#include "fracwell/nfunc.hpp"

namespace fracwell {

enum class Exec { Serial, Parallel };

struct PairSums {
  double modular = 0.0;  // 2 sum w G(scale |D|)
  double pairing = 0.0;  // 2 sum w g(scale |D|) scale |D|
};

namespace kernels {

namespace serial {
void quotients(std::span<const Complex> u, const KernelTable& t, std::span<Complex> out);
void magnitudes(std::span<const Complex> d, std::span<double> out);
PairSums pair_sums(std::span<const double> mags, const KernelTable& t, const NFunction& G, double scale);
// Gradient of the modular with respect to (Re u_i, Im u_i), packed as complex.
void modular_gradient(std::span<const Complex> u, const KernelTable& t, const NFunction& G,
                      std::span<Complex> grad);
double nodal_power_sum(std::span<const Complex> u, double exponent);
}  // namespace serial

namespace parallel {
void quotients(std::span<const Complex> u, const KernelTable& t, std::span<Complex> out);
void magnitudes(std::span<const Complex> d, std::span<double> out);
PairSums pair_sums(std::span<const double> mags, const KernelTable& t, const NFunction& G, double scale);
void modular_gradient(std::span<const Complex> u, const KernelTable& t, const NFunction& G,
                      std::span<Complex> grad);
double nodal_power_sum(std::span<const Complex> u, double exponent);
}  // namespace parallel

// Dispatching front ends.
void quotients(Exec e, std::span<const Complex> u, const KernelTable& t, std::span<Complex> out);
void magnitudes(Exec e, std::span<const Complex> d, std::span<double> out);
PairSums pair_sums(Exec e, std::span<const double> mags, const KernelTable& t, const NFunction& G,
                   double scale = 1.0);
void modular_gradient(Exec e, std::span<const Complex> u, const KernelTable& t, const NFunction& G,
                      std::span<Complex> grad);
double nodal_power_sum(Exec e, std::span<const Complex> u, double exponent);

}  // namespace kernels
}  // namespace fracwell
