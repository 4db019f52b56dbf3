// Parallel kernels against their serial references on the same inputs. The
// Dobrushin and goodness references follow the definitions literally, so
// their inputs are kept small.
#include <benchmark/benchmark.h>

#include "gibbsent/kernels.hpp"

using namespace gibbsent;

namespace {

GibbsStructure induced(int n, double beta) { return induced_structure(random_sofic(2, n, 7), ising_potential(beta, 2)); }

template <auto Fn>
void partition(benchmark::State& state) {
  const auto G = induced(static_cast<int>(state.range(0)), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(G, 1ULL << 24));
}

template <auto Fn>
void good(benchmark::State& state) {
  const auto sigma = random_sofic(2, static_cast<int>(state.range(0)), 3);
  const auto S = ball(2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(sigma, S));
}

template <auto Fn>
void dobrushin_all(benchmark::State& state) {
  const auto G = induced(static_cast<int>(state.range(0)), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(G, 1ULL << 24));
}

template <auto Fn>
void ti(benchmark::State& state) {
  const auto G = induced(static_cast<int>(state.range(0)), 0.3);
  const TiParams p{11, 20, 40, 10, 4};
  for (auto _ : state) benchmark::DoNotOptimize(Fn(G, p, 5));
}

template <auto Fn>
void seward(benchmark::State& state) {
  const auto spec = ising_spec(0.3, 2);
  const auto F = set_difference(ball(2, 1), FiniteWindow::identity());
  for (auto _ : state) benchmark::DoNotOptimize(Fn(spec, F, static_cast<int>(state.range(0)), 9));
}

}  // namespace

BENCHMARK(partition<kernels::partition_summary>)->Arg(16)->Arg(20)->Name("partition_summary/parallel");
BENCHMARK(partition<reference::partition_summary>)->Arg(16)->Arg(20)->Name("partition_summary/reference");
BENCHMARK(good<kernels::good_fraction>)->Arg(1000)->Name("good_fraction/parallel");
BENCHMARK(good<reference::good_fraction>)->Arg(1000)->Name("good_fraction/reference");
BENCHMARK(dobrushin_all<kernels::dobrushin_rows>)->Arg(12)->Name("dobrushin_rows/parallel");
BENCHMARK(dobrushin_all<reference::dobrushin_rows>)->Arg(12)->Name("dobrushin_rows/reference");
BENCHMARK(ti<kernels::ti_batch_means>)->Arg(2000)->Name("ti_batch_means/parallel");
BENCHMARK(ti<reference::ti_batch_means>)->Arg(2000)->Name("ti_batch_means/reference");
BENCHMARK(seward<kernels::seward_samples>)->Arg(400)->Name("seward_samples/parallel");
BENCHMARK(seward<reference::seward_samples>)->Arg(400)->Name("seward_samples/reference");

BENCHMARK_MAIN();
