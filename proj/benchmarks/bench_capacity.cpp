#include "capcurv/capacity.hpp"
#include "capcurv/curvature_fit.hpp"
#include "capcurv/expansion.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace capcurv;

void BM_SymmetricCapacity(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CapacityQuery q{MetricModel::space_form(n, 1.0), 0.05, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_capacity(q).value);
}
BENCHMARK(BM_SymmetricCapacity)->DenseRange(3, 8);

void BM_SzegoBoundPolynomial(benchmark::State& state) {
  const std::vector<CurvatureTensor::Generator> g{{0, 1, 0, 1, 1.0}};
  const CapacityQuery q{MetricModel::curvature_polynomial(CurvatureTensor::from_generators(3, g)),
                        0.1, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(szego_upper_bound(q).value);
}
BENCHMARK(BM_SzegoBoundPolynomial)->Unit(benchmark::kMillisecond);

void BM_PredictedCapacity(benchmark::State& state) {
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predicted_capacity(5, 2.0, r, 20.0).predicted_capacity);
    r = r == 0.1 ? 0.05 : 0.1;
  }
}
BENCHMARK(BM_PredictedCapacity);

void BM_DeficitFitS3(benchmark::State& state) {
  const MetricModel m = MetricModel::space_form(3, 1.0);
  const std::vector<double> radii{0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625};
  for (auto _ : state) {
    const auto samples = collect_deficits(m, 2.0, radii);
    benchmark::DoNotOptimize(fit_deficit_coefficient(samples, 3, 2.0).kappa_hat);
  }
}
BENCHMARK(BM_DeficitFitS3)->Unit(benchmark::kMicrosecond);

}  // namespace
