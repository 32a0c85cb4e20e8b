// Serial vs OpenMP pair kernels. Arg: interior node count m (pad = m).

#include <benchmark/benchmark.h>

#include <vector>

#include "fracwell/kernels.hpp"
#include "fracwell/rng.hpp"

using namespace fracwell;

namespace {

struct Setup {
  KernelTable table;
  std::vector<Complex> u;
  std::vector<Complex> quot;
  std::vector<double> mags;
  NFunction G = NFunction::power_sum(2, 3);

  explicit Setup(int m)
      : table(build_kernel({-1.0, 1.0, m, m}, 0.5, {MagneticKind::Linear, 0.7})),
        u(static_cast<std::size_t>(m)),
        quot(table.pairs.size()),
        mags(table.pairs.size()) {
    Rng rng(1);
    for (auto& z : u) z = Complex(rng.normal(), rng.normal());
    kernels::quotients(Exec::Serial, u, table, quot);
    kernels::magnitudes(Exec::Serial, quot, mags);
  }
};

template <Exec E>
void BM_pair_sums(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pair_sums(E, s.mags, s.table, s.G));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.table.pairs.size()));
}

template <Exec E>
void BM_quotients(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::quotients(E, s.u, s.table, s.quot);
    benchmark::DoNotOptimize(s.quot.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.table.pairs.size()));
}

template <Exec E>
void BM_modular_gradient(benchmark::State& state) {
  const Setup s(static_cast<int>(state.range(0)));
  std::vector<Complex> grad(s.u.size());
  for (auto _ : state) {
    kernels::modular_gradient(E, s.u, s.table, s.G, grad);
    benchmark::DoNotOptimize(grad.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.table.pairs.size()));
}

}  // namespace

BENCHMARK(BM_pair_sums<Exec::Serial>)->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(BM_pair_sums<Exec::Parallel>)->RangeMultiplier(2)->Range(64, 1024)->UseRealTime();
BENCHMARK(BM_quotients<Exec::Serial>)->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(BM_quotients<Exec::Parallel>)->RangeMultiplier(2)->Range(64, 1024)->UseRealTime();
BENCHMARK(BM_modular_gradient<Exec::Serial>)->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(BM_modular_gradient<Exec::Parallel>)->RangeMultiplier(2)->Range(64, 1024)->UseRealTime();

BENCHMARK_MAIN();
