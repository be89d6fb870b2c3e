#include <benchmark/benchmark.h>

#include "hodge/ineqlab.hpp"
#include "hodge/lefschetz.hpp"
#include "hodge/random.hpp"
#include "hodge/ring.hpp"

using namespace hodge;

static void BM_Wedge(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto ctx = ExteriorContext::make(n);
  rnd::Rng rng(1);
  const Form a = rnd::random_form(rng, ctx, 1, 1);
  const Form b = rnd::random_form(rng, ctx, n / 2, n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge)->DenseRange(2, 4);

static void BM_VerifyPair(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  auto ctx = ExteriorContext::make(n);
  rnd::Rng rng(2);
  std::vector<PositiveForm> factors;
  for (int i = 0; i < r; ++i) factors.push_back(rnd::random_positive_form(rng, ctx, 10.0));
  const Form nu = product_of_positive(factors, ctx);
  const PositiveForm omega = rnd::random_positive_form(rng, ctx, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(verify_hr_pair(nu, omega));
}
BENCHMARK(BM_VerifyPair)->Args({2, 1})->Args({3, 1})->Args({4, 1})->Args({4, 2})->Unit(benchmark::kMicrosecond);

static void BM_LocalMetric(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto ctx = ExteriorContext::make(n);
  rnd::Rng rng(3);
  const PositiveForm w1 = rnd::random_positive_form(rng, ctx, 10.0);
  const PositiveForm omega = rnd::random_positive_form(rng, ctx, 10.0);
  const auto pair = verify_hr_pair(positive_form_to_form(w1), omega);
  const Form a = rnd::random_form(rng, ctx, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(local_metric(a, pair));
}
BENCHMARK(BM_LocalMetric)->DenseRange(3, 4)->Unit(benchmark::kMicrosecond);

static void BM_SweepLocal1(benchmark::State& state) {
  SweepConfig c;
  c.n = 3;
  c.r = 1;
  c.samples = 32;
  for (auto _ : state) benchmark::DoNotOptimize(sweep_local_1(c));
}
BENCHMARK(BM_SweepLocal1)->Unit(benchmark::kMillisecond);

static void BM_KunnethProduct(benchmark::State& state) {
  const auto t2 = torus_ring(2, PositiveForm::standard(ExteriorContext::make(2)));
  const auto p2 = projective_space_ring(2);
  for (auto _ : state) benchmark::DoNotOptimize(kunneth_product(t2.ring(), p2));
}
BENCHMARK(BM_KunnethProduct)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
