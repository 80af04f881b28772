#include <benchmark/benchmark.h>

#include "hcm/corrector.hpp"
#include "hcm/fixtures.hpp"
#include "hcm/hur.hpp"
#include "hcm/kernel.hpp"
#include "hcm/random.hpp"

namespace {

void BM_OpNorm(benchmark::State& state) {
  hcm::Rng rng(1);
  const int d = static_cast<int>(state.range(0));
  const hcm::Matrix a = hcm::random_matrix(rng, d, 4 * d);
  for (auto _ : state) benchmark::DoNotOptimize(hcm::op_norm(a));
}
BENCHMARK(BM_OpNorm)->Arg(2)->Arg(8)->Arg(32)->Arg(128);

void BM_PosSqrt(benchmark::State& state) {
  hcm::Rng rng(2);
  const hcm::ModuleVector x = hcm::random_vector(rng, static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(hcm::abs_value(x));
}
BENCHMARK(BM_PosSqrt)->Arg(2)->Arg(8)->Arg(32);

void BM_Extend(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  hcm::FixtureSpec spec{hcm::fixture::TailShift{hcm::GProfile::power_phase(0.25, 2.0, 2.0)}, 1, k, k + 1};
  const hcm::Fixture fx = hcm::generate(spec, 3);
  const hcm::Corrector corr(fx.map, fx.control, hcm::DomainSpec::ball_product(1.0, 2.0));
  hcm::Rng rng(4);
  const hcm::ModuleVector x = hcm::random_vector_with_norm(rng, 1, k, 50.0);
  for (auto _ : state) benchmark::DoNotOptimize(corr.extend(x));
}
BENCHMARK(BM_Extend)->Arg(2)->Arg(8)->Arg(32);

void BM_HurExtrapolate(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0)) / 2.0;
  hcm::FixtureSpec spec{hcm::fixture::TailShift{hcm::GProfile::sum_phase(0.01, p)}, 1, 3, 4};
  const hcm::Fixture fx = hcm::generate(spec, 5);
  const hcm::HurControl h = hcm::HurControl::make(hcm::ControlSpec::power_sum(0.01, p));
  hcm::Rng rng(6);
  const hcm::ModuleVector x = hcm::random_vector_with_norm(rng, 1, 3, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(hcm::hur_extrapolate(fx.map, h, x));
}
BENCHMARK(BM_HurExtrapolate)->Arg(1)->Arg(3)->Arg(6);

}  // namespace
BENCHMARK_MAIN();
