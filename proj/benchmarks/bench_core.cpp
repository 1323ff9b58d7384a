#include <benchmark/benchmark.h>

#include <complex>

#include "deltatrap/analysis.hpp"
#include "deltatrap/analytic.hpp"
#include "deltatrap/oracle.hpp"
#include "deltatrap/specfun.hpp"

namespace {

namespace an = deltatrap::analytic;
namespace o = deltatrap::oracle;

// One point per evaluation region: series, pole sum, continued fraction, reflection.
void BM_Faddeyeva(benchmark::State& state) {
  const std::complex<double> points[] = {{0.3, 0.2}, {3.0, 1.5}, {12.0, 4.0}, {2.0, -1.0}};
  const auto z = points[state.range(0)];
  for (auto _ : state) benchmark::DoNotOptimize(deltatrap::specfun::faddeyeva(z));
}
BENCHMARK(BM_Faddeyeva)->DenseRange(0, 3);

void BM_ClosedForm(benchmark::State& state) {
  const an::WellParams p(0.7, 1.5);
  double x = -4.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(an::exact_wavefunction_closed({x, 1.0}, p));
    x = x > 6.0 ? -4.0 : x + 0.01;
  }
}
BENCHMARK(BM_ClosedForm);

void BM_Quadrature(benchmark::State& state) {
  const an::WellParams p(0.7, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(an::exact_wavefunction_quadrature({0.7, 1.0}, p));
}
BENCHMARK(BM_Quadrature)->Unit(benchmark::kMicrosecond);

void BM_CrankNicolsonStep(benchmark::State& state) {
  const an::WellParams p(1.0, 1.0);
  o::GridSpec g{-50.0, 50.0, static_cast<std::size_t>(state.range(0)), 0.0};
  g.dt = g.dx();
  const o::DeltaModel model(0.01, 1.0);
  auto f = o::ground_state_on_grid(g, model).field;
  o::CrankNicolson stepper(g, model, p);
  for (auto _ : state) {
    // Restart before the well nears the edge.
    if (f.t > 40.0) f.t = 0.0;
    stepper.step(f);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(20001)->Arg(80001)->Unit(benchmark::kMicrosecond);

void BM_Spectrum(benchmark::State& state) {
  const an::WellParams p(10.0, 20.0);
  const auto t = deltatrap::analysis::uniform_times(8.0, 2048);
  std::vector<double> y;
  for (double s : t) y.push_back(std::cos(25.0 * s) + 0.5 * std::cos(75.0 * s));
  for (auto _ : state) benchmark::DoNotOptimize(deltatrap::analysis::spectrum(t, y, p));
}
BENCHMARK(BM_Spectrum)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
