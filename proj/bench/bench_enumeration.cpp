// Serial reference vs the enumeration kernel, single- and multi-threaded.
//
//   bench_enumeration --benchmark_filter=I:9

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "fcfs/analytic.hpp"
#include "fcfs/model.hpp"
#include "fcfs/reference.hpp"
#include "fcfs/threads.hpp"

namespace {

// Random connected model with I agents and I goods at 70% of its stability bound.
fcfs::MatchingModel bench_model(int n) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> u(0.5, 1.5);
  fcfs::ModelSpec spec;
  for (int k = 0; k < n; ++k) {
    spec.agents.push_back({"c" + std::to_string(k + 1), u(rng)});
    spec.goods.push_back({"s" + std::to_string(k + 1), u(rng)});
  }
  double a = 0, b = 0;
  for (const auto& t : spec.agents) a += t.alpha;
  for (const auto& t : spec.goods) b += t.beta;
  for (auto& t : spec.agents) t.alpha /= a;
  for (auto& t : spec.goods) t.beta /= b;
  std::bernoulli_distribution extra(0.3);
  for (int i = 0; i < n; ++i) {
    spec.edges.push_back({spec.goods[i].name, spec.agents[i].name});
    spec.edges.push_back({spec.goods[(i + 1) % n].name, spec.agents[i].name});
    for (int j = 0; j < n; ++j) {
      if (j != i && j != (i + 1) % n && extra(rng)) spec.edges.push_back({spec.goods[j].name, spec.agents[i].name});
    }
  }
  spec.lambda_bar = 0.5;
  spec.mu_bar = 1.0;
  const auto m = fcfs::MatchingModel::build(std::move(spec));
  return m.with_rates(0.7 * fcfs::max_stable_rho(m).max_rho, 1.0);
}

void BM_Reference(benchmark::State& state) {
  const auto m = bench_model(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fcfs::reference::analyze(m));
  state.counters["terms"] = static_cast<double>(fcfs::ordered_subset_count(m.agent_count()));
}

void BM_Kernel(benchmark::State& state) {
  const auto m = bench_model(static_cast<int>(state.range(0)));
  fcfs::EnumerationOptions opt;
  opt.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fcfs::analyze(m, opt));
  state.counters["terms"] = static_cast<double>(fcfs::ordered_subset_count(m.agent_count()));
  state.counters["threads"] = fcfs::worker_count(opt.threads);
}

BENCHMARK(BM_Reference)->ArgName("I")->DenseRange(8, 10)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Kernel)
    ->ArgNames({"I", "threads"})
    ->ArgsProduct({{8, 9, 10}, {1, 0}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
