// Serial vs OpenMP-parallel kernels. The argument is the worker count;
// 1 takes the serial path.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <algorithm>
#include <limits>

#include "tricav/analysis.hpp"
#include "tricav/atom.hpp"
#include "tricav/slab_observables.hpp"

using namespace tricav;

namespace {

ThreeSlabSystem sic_halfspaces() {
  ThreeSlabSystem s;
  s.materials = {Material::sic(), Material::sic(), Material::sic()};
  const double inf = std::numeric_limits<double>::infinity();
  s.geometry = {inf, 1e-6, inf, 1e-6, 1.5e-6};
  s.T1 = 250.0;
  s.T2 = 300.0;
  s.T3 = 350.0;
  s.Te = 300.0;
  return s;
}

ThreeSlabSystem sapphire_halfspaces() {
  ThreeSlabSystem s = sic_halfspaces();
  const Material sa = Material::sapphire_like();
  s.materials = {sa, sa, sa};
  return s;
}

void BM_pressure_eq(benchmark::State& st) {
  const auto s = sapphire_halfspaces();
  const Accuracy acc = Accuracy::with(1e-8, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(pressure_eq_slab1(s, 300.0, acc));
}

void BM_heat_flux(benchmark::State& st) {
  const auto s = sic_halfspaces();
  const Accuracy acc = Accuracy::with(1e-3, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(delta_slab(s, 2, 1, acc).total());
}

void BM_nonadditivity_map(benchmark::State& st) {
  const auto s = sapphire_halfspaces();
  const Accuracy acc = Accuracy::with(1e-4, static_cast<int>(st.range(0)));
  const std::vector<double> d = {0.1e-6, 0.3e-6, 1e-6, 3e-6};
  for (auto _ : st) benchmark::DoNotOptimize(analysis::nonadditivity_map(s, d, d, 300.0, acc));
}

void BM_atom_profile(benchmark::State& st) {
  AtomCavity c;
  c.material1 = c.material3 = Material::sapphire_like();
  c.delta1 = c.delta3 = 5e-6;
  c.D = 10e-6;
  c.T1 = c.T3 = 300.0;
  c.Te = 600.0;
  const Accuracy acc = Accuracy::with(1e-3, static_cast<int>(st.range(0)));
  const auto z = cavity_grid(c.D, 9);
  for (auto _ : st) benchmark::DoNotOptimize(atom_potential(c, z, acc));
}

void workers(benchmark::internal::Benchmark* b) {
  b->Arg(1);
  // At least two workers so the parallel path runs even on one core.
  b->Arg(std::max(2, omp_get_max_threads()));
  b->Unit(benchmark::kMillisecond)->UseRealTime();
}

}  // namespace

BENCHMARK(BM_pressure_eq)->Apply(workers);
BENCHMARK(BM_heat_flux)->Apply(workers);
BENCHMARK(BM_nonadditivity_map)->Apply(workers);
BENCHMARK(BM_atom_profile)->Apply(workers)->Iterations(1);

BENCHMARK_MAIN();
