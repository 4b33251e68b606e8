// Parallel kernels against their serial references.
//
//   ./build/bench/didcont_bench
// DIDCONT_THREADS sets the worker count of the Monte Carlo pair; the other
// kernels follow OMP_NUM_THREADS.

#include "didcont/inference.hpp"
#include "didcont/kernel.hpp"
#include "didcont/simulation.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace didcont;

namespace {

Eigen::VectorXd uniform_doses(Eigen::Index n)
{
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  Eigen::VectorXd d(n);
  for (auto& x : d)
    x = u(rng);
  return d;
}

ScoreVector synthetic_scores(Eigen::Index n)
{
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  ScoreVector s;
  s.psi.resize(n);
  s.kernel_term.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.psi[i] = 5.0 + z(rng);
    s.kernel_term[i] = 0.5 + 0.1 * z(rng);
  }
  s.pi_hat = s.kernel_term.mean();
  s.delta_hat = s.psi.mean();
  return s;
}

void omega_parallel(benchmark::State& state)
{
  const auto d = uniform_doses(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(omega_weights(d, 3.0, 0.2, KernelFamily::gaussian));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void omega_serial(benchmark::State& state)
{
  const auto d = uniform_doses(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(omega_weights_serial(d, 3.0, 0.2, KernelFamily::gaussian));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bootstrap_parallel(benchmark::State& state)
{
  const auto s = synthetic_scores(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(multiplier_bootstrap(s, 999, 0.05, 3));
}

void bootstrap_serial(benchmark::State& state)
{
  const auto s = synthetic_scores(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(multiplier_bootstrap_serial(s, 999, 0.05, 3));
}

void mc_parallel(benchmark::State& state)
{
  for (auto _ : state)
    benchmark::DoNotOptimize(
      monte_carlo(Design::panel, 500, 10, 8, "under", EstimationConfig{}, 4));
}

void mc_serial(benchmark::State& state)
{
  for (auto _ : state)
    benchmark::DoNotOptimize(
      monte_carlo_serial(Design::panel, 500, 10, 8, "under", EstimationConfig{}, 4));
}

} // namespace

BENCHMARK(omega_parallel)->Arg(100000)->Arg(1000000)->UseRealTime();
BENCHMARK(omega_serial)->Arg(100000)->Arg(1000000)->UseRealTime();
BENCHMARK(bootstrap_parallel)->Arg(2000)->Arg(20000)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(bootstrap_serial)->Arg(2000)->Arg(20000)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(mc_parallel)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(mc_serial)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
