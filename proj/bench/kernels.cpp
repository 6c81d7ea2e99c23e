#include <random>

#include <benchmark/benchmark.h>

#include "permucat/excoll.hpp"
#include "permucat/gitwin.hpp"
#include "permucat/toric.hpp"

using namespace permucat;

namespace {

std::vector<TDivisor> sample_divisors(const ToricVariety& v, int count) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long long> pick(-2, 2);
  std::vector<TDivisor> out(count, TDivisor(v.nrays()));
  for (auto& d : out)
    for (auto& x : d) x = pick(rng);
  return out;
}

// cohomology scan over the candidate box; cache off so every iteration does the work
void toric_cohomology(benchmark::State& st) {
  const ToricVariety& v = lm_variety(static_cast<int>(st.range(0)));
  auto ds = sample_divisors(v, 8);
  CohomOptions opt{1, st.range(1) != 0, true, false};
  for (auto _ : st)
    for (const auto& d : ds) benchmark::DoNotOptimize(v.cohomology(d, opt));
}
BENCHMARK(toric_cohomology)->ArgsProduct({{4, 5}, {0, 1}})->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);

void window_pairs(benchmark::State& st) {
  GitwinOptions opt{st.range(1) != 0, true};
  for (auto _ : st) benchmark::DoNotOptimize(windows_check(static_cast<int>(st.range(0)), opt));
}
BENCHMARK(window_pairs)->ArgsProduct({{6, 7}, {0, 1}})->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);

void gram(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(euler_pairing_matrix(static_cast<int>(st.range(0)), Order::lex, st.range(1) != 0));
}
BENCHMARK(gram)->ArgsProduct({{4}, {0, 1}})->ArgNames({"n", "parallel"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
