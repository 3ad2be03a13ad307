#include <benchmark/benchmark.h>

#include "lhvlab/bell.hpp"
#include "lhvlab/random.hpp"
#include "lhvlab/steering.hpp"

using namespace lhvlab;

namespace {

MeasurementAssemblage random_settings(std::size_t dim, std::size_t m, Rng& rng) {
  std::vector<Povm> povms;
  for (std::size_t x = 0; x < m; ++x) povms.push_back(random_projective(dim, rng));
  return MeasurementAssemblage(std::move(povms));
}

void BM_HermitianEigen(benchmark::State& state) {
  Rng rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const HermitianCheckedMatrix h(random_density(n, rng).matrix());
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigen(h));
}
BENCHMARK(BM_HermitianEigen)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_BellLp(benchmark::State& state) {
  Rng rng(2);
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const CorrelationTensor p =
      correlations_of(random_pure(d * d, rng), random_settings(d, m, rng), random_settings(d, m, rng));
  for (auto _ : state) benchmark::DoNotOptimize(decide_bell_local(p));
  state.counters["vertices"] = double(strategy_count(m, d, kVertexCap) * strategy_count(m, d, kVertexCap));
}
BENCHMARK(BM_BellLp)->Args({2, 2})->Args({3, 2})->Args({2, 3})->Args({3, 3})->Unit(benchmark::kMillisecond);

void BM_SteeringExample(benchmark::State& state) {
  const Assemblage s = assemblage_of(
      maximally_entangled(2),
      MeasurementAssemblage({projective_measurement(Basis::computational(2)), projective_measurement(fourier_basis(2))}));
  for (auto _ : state) benchmark::DoNotOptimize(decide_unsteerable(s));
}
BENCHMARK(BM_SteeringExample)->Unit(benchmark::kMicrosecond);

void BM_NearestLhs(benchmark::State& state) {
  Rng rng(3);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  SteeringOptions opts;
  opts.threads = static_cast<std::size_t>(state.range(2));
  const Assemblage s = assemblage_of(random_density(d * d, rng), random_settings(d, m, rng));
  std::size_t iterations = 0;
  for (auto _ : state) {
    const NearestLhsResult r = nearest_lhs_model(s, opts);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r);
  }
  state.counters["solver_iters"] = double(iterations);
}
BENCHMARK(BM_NearestLhs)
    ->Args({2, 2, 1})
    ->Args({2, 4, 1})
    ->Args({3, 3, 1})
    ->Args({3, 3, 4})
    ->Args({3, 5, 1})
    ->Args({3, 5, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
