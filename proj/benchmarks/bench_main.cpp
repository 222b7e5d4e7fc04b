#include <benchmark/benchmark.h>

#include "coopt/clearing.hpp"
#include "coopt/pricing.hpp"
#include "coopt/settlement.hpp"
#include "coopt/verify.hpp"

namespace {

void BM_ComputePtdf(benchmark::State& state) {
  coopt::MarketCase c = coopt::random_case(17, {.max_buses = static_cast<int>(state.range(0))});
  for (auto _ : state) {
    benchmark::DoNotOptimize(coopt::compute_ptdf(c.network, {}));
  }
}
BENCHMARK(BM_ComputePtdf)->Arg(8)->Arg(16)->Arg(32);

void BM_ClearTwoBus(benchmark::State& state) {
  coopt::MarketCase c = coopt::builtin_two_bus();
  for (auto _ : state) {
    benchmark::DoNotOptimize(coopt::clear_cooptimization(c));
  }
}
BENCHMARK(BM_ClearTwoBus);

void BM_ClearRandom(benchmark::State& state) {
  coopt::MarketCase c = coopt::random_case(
      1234, {.max_buses = static_cast<int>(state.range(0)),
             .max_scenarios = 6,
             .max_generators = 6,
             .max_loads = 6});
  for (auto _ : state) {
    benchmark::DoNotOptimize(coopt::clear_cooptimization(c));
  }
}
BENCHMARK(BM_ClearRandom)->Arg(6)->Arg(10)->Arg(16);

void BM_SettleTwoBus(benchmark::State& state) {
  coopt::MarketCase c = coopt::builtin_two_bus();
  coopt::ClearingSolution s = coopt::clear_cooptimization(c);
  coopt::PriceReport p = coopt::compute_prices(c, s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coopt::settle(c, s, p, coopt::FluctuationScheme::ExAnte));
  }
}
BENCHMARK(BM_SettleTwoBus);

}  // namespace

BENCHMARK_MAIN();
