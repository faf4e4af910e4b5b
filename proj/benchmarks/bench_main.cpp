#include <benchmark/benchmark.h>

#include "modbasis/basis.hpp"
#include "modbasis/eta.hpp"
#include "modbasis/leveldata.hpp"
#include "modbasis/series.hpp"
#include "modbasis/verify.hpp"

using namespace modbasis;

namespace {

QSeries sample(Exponent prec) { return get_level(6).hauptmodul_series(prec); }

void BM_Mul(benchmark::State& state) {
  const QSeries a = sample(state.range(0));
  const QSeries b = int_pow(a, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, b));
}
BENCHMARK(BM_Mul)->Arg(64)->Arg(256)->Arg(1024);

void BM_MulSchoolbook(benchmark::State& state) {
  const QSeries a = sample(state.range(0));
  const QSeries b = int_pow(a, 3);
  for (auto _ : state) benchmark::DoNotOptimize(mul_schoolbook(a, b));
}
BENCHMARK(BM_MulSchoolbook)->Arg(64)->Arg(256);

void BM_EulerProduct(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(euler_product(state.range(0)));
}
BENCHMARK(BM_EulerProduct)->Arg(256)->Arg(4096);

void BM_ExpandLevel18Form(benchmark::State& state) {
  const EtaCombination& form = get_level(18).weight_forms.at(0).combination;
  for (auto _ : state) benchmark::DoNotOptimize(expand_combination(form, state.range(0)));
}
BENCHMARK(BM_ExpandLevel18Form)->Arg(128)->Arg(512);

void BM_Ladder(benchmark::State& state) {
  const auto level = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Ladder::build(level, 0, Space::M, 100, 200));
}
BENCHMARK(BM_Ladder)->Arg(6)->Arg(18)->Unit(benchmark::kMillisecond);

void BM_CongruenceScan(benchmark::State& state) {
  for (auto _ : state) {
    BasisCache::global().clear();
    const auto r = admissible_residues(2);
    benchmark::DoNotOptimize(congruence_scan(6, 2, 4, 4, r, r, 200));
  }
}
BENCHMARK(BM_CongruenceScan)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
