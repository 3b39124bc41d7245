#include <benchmark/benchmark.h>

#include <random>

#include "stacklaw/dse.hpp"
#include "support.hpp"

using namespace stacklaw;

static void BM_Evaluate(benchmark::State& state) {
  const DesignPoint point = testsupport::base_point();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(point));
  }
}
BENCHMARK(BM_Evaluate);

static void BM_LayerTemperatures(benchmark::State& state) {
  std::mt19937_64 rng(1);
  ThermalStack stack;
  stack.r_sink = 0.1;
  std::uniform_real_distribution<double> power(0.0, 5.0);
  const auto layers = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  for (std::size_t i = 0; i < layers; ++i) {
    LayerThermal layer{TileGrid(dim, dim), 0.1};
    for (double& p : layer.power_w.values) p = power(rng);
    stack.layers.push_back(std::move(layer));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(layer_temperatures(stack));
  }
  state.SetComplexityN(static_cast<std::int64_t>(layers * dim * dim));
}
BENCHMARK(BM_LayerTemperatures)
    ->Args({2, 4})
    ->Args({4, 16})
    ->Args({8, 16})
    ->Args({8, 64})
    ->Complexity();

static void BM_Sweep(benchmark::State& state) {
  SweepSpec spec;
  spec.base = testsupport::base_point();
  spec.parameters = {
      {"threads", {1, 2, 4, 8}},
      {"capacity", {4194304, 8388608, 16777216, 33554432}},
      {"line_size", {64, 128, 256, 512}},
      {"leading_edge", {0, 50, 100, 150}},
  };
  const auto jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep(spec, jobs));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 256);
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->UseRealTime();

static void BM_Pareto(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<SweepRow> rows(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].index = i;
    rows[i].result.throughput = dist(rng);
    rows[i].result.cpi = 1.0;
    rows[i].result.total_power_w = dist(rng);
    rows[i].result.max_temp_c = dist(rng);
  }
  const std::vector<Objective> objectives = {
      {"throughput", Direction::Maximize},
      {"total_power", Direction::Minimize},
      {"max_temp", Direction::Minimize}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pareto(rows, objectives));
  }
}
BENCHMARK(BM_Pareto)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
