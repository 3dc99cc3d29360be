#include <benchmark/benchmark.h>

#include "jetphase/catalog.hpp"

using namespace jetphase;

namespace {

const Constants kConstants{1.3, 0.7, 1.7, 0.9};

const CatalogModel& model_for(int which) {
  static const CatalogModel mk = minkowski(kConstants);
  static const CatalogModel rn = reissner_nordstrom(kConstants, 1.0, 0.4, 0.3);
  return which == 0 ? mk : rn;
}

const char* label(int which) { return which == 0 ? "minkowski" : "reissner_nordstrom"; }

void BM_PhaseStructure(benchmark::State& state) {
  const auto& cm = model_for(static_cast<int>(state.range(0)));
  const auto pts = cm.sample_points(64, 1);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(phase_structure(cm.model, pts[i++ % pts.size()]));
  state.SetLabel(label(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PhaseStructure)->Arg(0)->Arg(1);

void BM_DualityResiduals(benchmark::State& state) {
  const auto& cm = model_for(static_cast<int>(state.range(0)));
  const auto pts = cm.sample_points(64, 2);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(duality_residuals(cm.model, pts[i++ % pts.size()]));
  state.SetLabel(label(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DualityResiduals)->Arg(0)->Arg(1);

void BM_EomRhs(benchmark::State& state) {
  const auto& cm = model_for(static_cast<int>(state.range(0)));
  const auto pts = cm.sample_points(64, 3);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(eom_rhs(cm.model, pts[i++ % pts.size()]));
  state.SetLabel(label(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EomRhs)->Arg(0)->Arg(1);

// 1000 fixed rk4 steps on a bound RN orbit.
void BM_Rk4Orbit(benchmark::State& state) {
  const auto& cm = model_for(1);
  const auto p0 = PhasePoint::make(cm.model, Vec4(0.0, 7.0, 1.2, 0.3), Vec3(0.01, 0.005, 0.02));
  IntegratorOptions o;
  o.step = 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(cm.model, p0, 10.0, o));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Rk4Orbit)->Unit(benchmark::kMillisecond);

void BM_MomentumMap(benchmark::State& state) {
  const auto& cm = model_for(static_cast<int>(state.range(0)));
  const auto pts = cm.sample_points(64, 4);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(momentum_map(cm.model, cm.killing, pts[i++ % pts.size()]));
  state.SetLabel(label(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_MomentumMap)->Arg(0)->Arg(1);

void BM_ClosureResidual(benchmark::State& state) {
  const auto& cm = model_for(1);
  const auto pts = cm.sample_points(16, 5);
  const auto om = omega_form(cm.model);
  std::size_t i = 0;
  for (auto _ : state) {
    const PhasePoint& p = pts[i++ % pts.size()];
    benchmark::DoNotOptimize(closure_residual(om, p.coords(), phase_fd_steps(cm.model, p)));
  }
}
BENCHMARK(BM_ClosureResidual)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
