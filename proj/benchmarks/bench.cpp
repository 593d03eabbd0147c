#include <random>

#include <benchmark/benchmark.h>

#include "sensorplace/graph.hpp"
#include "sensorplace/instance.hpp"
#include "sensorplace/kalman.hpp"
#include "sensorplace/resilient.hpp"

namespace sp = sensorplace;

namespace {

sp::ProblemInstance stochastic(int n) {
  sp::StochasticConfig cfg;
  cfg.nodes = n;
  cfg.extra_edges = 2 * n;
  cfg.seed = static_cast<std::uint64_t>(n);
  return sp::generate_row_stochastic_instance(cfg);
}

// Expected to grow roughly like l_max * n * H.
void BM_Rgkfsp(benchmark::State& state) {
  const auto inst = stochastic(static_cast<int>(state.range(0)));
  const auto dmap = sp::bfs_distances(sp::graph_from_matrix(inst.system.dynamics),
                                      inst.system.input_node);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::solve_rgkfsp(inst.system, inst.costs, dmap));
  }
  state.counters["H"] = static_cast<double>(inst.costs.placement_budget);
  state.counters["l_max"] = dmap.max_distance();
  state.counters["work"] = static_cast<double>(dmap.max_distance() + 1) *
                           static_cast<double>(state.range(0)) *
                           static_cast<double>(inst.costs.placement_budget);
}
BENCHMARK(BM_Rgkfsp)->RangeMultiplier(2)->Range(8, 128);

void BM_Knapsack(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> value(1, 1000);
  std::uniform_int_distribution<int> size(1, 500);
  sp::KnapsackInstance inst;
  for (int i = 0; i < 200; ++i) {
    inst.values.push_back(value(rng));
    inst.sizes.push_back(size(rng));
  }
  inst.capacity = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(sp::knapsack_dp(inst));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Knapsack)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oN);

void BM_DareNoisy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto inst = stochastic(n);
  inst.system.sensor_noise = 0.1 * sp::Matrix::Identity(n, n);
  sp::Indicator mu(n);
  for (int j = 0; j < n; j += 3) mu.set(j);
  for (auto _ : state) benchmark::DoNotOptimize(sp::dare_solve(inst.system, mu));
}
BENCHMARK(BM_DareNoisy)->Arg(8)->Arg(16)->Arg(32);

void BM_ClosedForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = stochastic(n);
  const auto dmap = sp::bfs_distances(sp::graph_from_matrix(inst.system.dynamics),
                                      inst.system.input_node);
  sp::Indicator mu(n);
  mu.set(n - 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sp::closed_form_covariance(inst.system, mu, dmap));
  }
}
BENCHMARK(BM_ClosedForm)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
