#include <cmath>

#include <benchmark/benchmark.h>

#include "psqm/metrology.hpp"
#include "psqm/moments.hpp"
#include "psqm/opalg.hpp"
#include "psqm/states.hpp"

using namespace psqm;
using namespace psqm::opalg;

namespace {

constexpr double kHalfPi = 1.5707963267948966;
using HPoly = OperatorPolynomial<HpComplex>;

void BM_PassvState(benchmark::State& st) {
  const int m = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(states::passv({2.0, m, 0.0}));
}
BENCHMARK(BM_PassvState)->DenseRange(0, 4);

void BM_TableFromSpatsv(benchmark::State& st) {
  const auto s = states::spatsv({2.0, static_cast<int>(st.range(0)), 0.0});
  for (auto _ : st) benchmark::DoNotOptimize(table_from_state(s, 4));
}
BENCHMARK(BM_TableFromSpatsv)->DenseRange(0, 3);

void BM_PolyMultiply(benchmark::State& st) {
  const HPoly n0 = HPoly::number(0);
  const HPoly n1 = HPoly::number(1);
  const HPoly d = n0 - n1;
  for (auto _ : st) benchmark::DoNotOptimize(multiply(d, d));
}
BENCHMARK(BM_PolyMultiply);

void BM_Qfi(benchmark::State& st) {
  const SingleMziConfig c{{2.0, static_cast<int>(st.range(0)), 0.0}, 100.0, 0.0, kHalfPi, 1.0};
  for (auto _ : st) benchmark::DoNotOptimize(qfi(c));
}
BENCHMARK(BM_Qfi)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_CorrelatedUncertainty(benchmark::State& st) {
  const CorrelatedConfig c{{2.0, static_cast<int>(st.range(0)), 0.0}, 1e12, kHalfPi, 1e-8, 0.98};
  for (auto _ : st) benchmark::DoNotOptimize(correlated_uncertainty(c));
}
BENCHMARK(BM_CorrelatedUncertainty)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
