// Serial reference kernels against the OpenMP ones on a d = 2 perturbed lattice.
#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "gpm/config.hpp"
#include "gpm/parallel.hpp"
#include "gpm/reference.hpp"
#include "gpm/verify.hpp"

using namespace gpm;

namespace {

// spacing -> discretization over (0,1)^2 with H = 3 dx, h = 2.4 dx.
const Discretization& system_for(double spacing) {
  static std::map<double, std::unique_ptr<Discretization>> cache;
  auto& slot = cache[spacing];
  if (!slot) {
    const std::vector<double> lo{0, 0}, hi{1, 1};
    ParticleSystem s = generate_lattice(make_box_domain(2, lo, hi, 3 * spacing), spacing);
    s = set_influence_radius(perturb_positions(s, 0.2 * spacing, 1), 2.4 * spacing);
    slot = std::make_unique<Discretization>(std::move(s), WeightFunction::polynomial(2, 2));
  }
  return *slot;
}

double spacing_of(const benchmark::State& state) { return 1.0 / static_cast<double>(state.range(0)); }

void neighbors_reference(benchmark::State& state) {
  const auto& s = system_for(spacing_of(state)).system();
  for (auto _ : state) benchmark::DoNotOptimize(reference::brute_force_neighbors(s));
  state.counters["N"] = static_cast<double>(s.size());
}

void neighbors_cell_list(benchmark::State& state) {
  const auto& s = system_for(spacing_of(state)).system();
  for (auto _ : state) benchmark::DoNotOptimize(build_neighbor_list(s));
  state.counters["N"] = static_cast<double>(s.size());
}

void lap_reference(benchmark::State& state) {
  const auto& d = system_for(spacing_of(state));
  const auto phi = random_scalar(d.system(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(reference::lap(d.system(), d.weight(), phi));
  state.counters["N"] = static_cast<double>(d.size());
}

void lap_openmp(benchmark::State& state) {
  const auto& d = system_for(spacing_of(state));
  const auto phi = random_scalar(d.system(), 3);
  set_deterministic(state.range(1) != 0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_lap(d, phi));
  state.counters["N"] = static_cast<double>(d.size());
}

void div_plus_reference(benchmark::State& state) {
  const auto& d = system_for(spacing_of(state));
  const auto psi = random_vector(d.system(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(reference::div_plus(d.system(), d.weight(), psi));
}

void div_plus_openmp(benchmark::State& state) {
  const auto& d = system_for(spacing_of(state));
  const auto psi = random_vector(d.system(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(apply_div_plus(d, psi));
}

void matvec_reference(benchmark::State& state) {
  const auto a = assemble(system_for(spacing_of(state))).A;
  std::vector<double> x(a.cols, 1.0), y(a.rows);
  for (auto _ : state) {
    reference::multiply(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["nnz"] = static_cast<double>(a.nnz());
}

void matvec_openmp(benchmark::State& state) {
  const auto a = assemble(system_for(spacing_of(state))).A;
  std::vector<double> x(a.cols, 1.0), y(a.rows);
  for (auto _ : state) {
    a.multiply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["nnz"] = static_cast<double>(a.nnz());
}

}  // namespace

// Argument: 1 / spacing. Brute force is O(N^2), so it stops at 1/spacing = 40.
BENCHMARK(neighbors_reference)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(neighbors_cell_list)->Arg(20)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(lap_reference)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(lap_openmp)->Args({20, 1})->Args({40, 1})->Args({100, 1})->Args({100, 0})->Unit(benchmark::kMillisecond);
BENCHMARK(div_plus_reference)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(div_plus_openmp)->Arg(20)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(matvec_reference)->Arg(40)->Arg(100)->Unit(benchmark::kMicrosecond);
BENCHMARK(matvec_openmp)->Arg(40)->Arg(100)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
