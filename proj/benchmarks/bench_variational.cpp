#include "capcurv/variational.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace capcurv;

// One Dirichlet solve on the flat annulus per resolution level.
void BM_SolveFlat(benchmark::State& state) {
  const CapacityQuery q{MetricModel::space_form(3, 0.0), 1.0, 2.0};
  const Resolution res = Resolution::level(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(q, res).energy);
  state.counters["unknowns"] = static_cast<double>(solve_dirichlet(q, res).stats.unknowns);
}
BENCHMARK(BM_SolveFlat)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_SolvePolynomial(benchmark::State& state) {
  const std::vector<CurvatureTensor::Generator> g{{0, 1, 0, 1, 1.0}};
  const CapacityQuery q{MetricModel::curvature_polynomial(CurvatureTensor::from_generators(3, g)),
                        0.2, 2.0};
  const Resolution res = Resolution::level(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(q, res).energy);
}
BENCHMARK(BM_SolvePolynomial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
