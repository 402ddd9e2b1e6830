#include <benchmark/benchmark.h>

#include <vector>

#include "binomcensus/census.hpp"
#include "binomcensus/ff.hpp"
#include "binomcensus/lattice.hpp"

using namespace binomcensus;

static void BM_CountProducts(benchmark::State& state) {
  const std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13};
  const auto T = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lattice::count_products(primes, T));
}
BENCHMARK(BM_CountProducts)->Arg(1000)->Arg(1000000)->Arg(1000000000)->Arg(1000000000000);

static void BM_ExactSum(benchmark::State& state) {
  const auto in = census::CensusInput::make(static_cast<std::uint64_t>(state.range(0)), 1000000000000ull);
  for (auto _ : state) benchmark::DoNotOptimize(census::exact_sum(in));
}
BENCHMARK(BM_ExactSum)->Arg(13)->Arg(61)->Arg(211)->Arg(2311);

static void BM_StratumSums(benchmark::State& state) {
  const auto in = census::CensusInput::make(61, 1000000000ull);
  for (auto _ : state) benchmark::DoNotOptimize(census::stratum_sums(in));
}
BENCHMARK(BM_StratumSums);

static void BM_RabinBinomial(benchmark::State& state) {
  const auto ctx = ff::build_field(7, 2);
  const auto t = static_cast<std::uint64_t>(state.range(0));
  ff::Elem a = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ff::rabin_irreducible(ctx, ff::poly::binomial(ctx, t, a)));
    a = a % 48 + 1;
  }
}
BENCHMARK(BM_RabinBinomial)->Arg(16)->Arg(48)->Arg(144)->Arg(200);

static void BM_OracleCensus(benchmark::State& state) {
  const auto pp = nt::prime_power(static_cast<std::uint64_t>(state.range(0))).value();
  const auto ctx = ff::build_field(pp.prime, pp.exponent);
  for (auto _ : state) {
    std::uint64_t s = 0;
    for (std::uint64_t t = 1; t <= 200; ++t) s += ff::oracle_binomial_count(ctx, t, {}, 1);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_OracleCensus)->Arg(31)->Arg(49)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
