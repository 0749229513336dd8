#include <benchmark/benchmark.h>

#include "colorcenter/eigensolve.hpp"
#include "colorcenter/spectrum_simulator.hpp"

using namespace colorcenter;

static void BM_TransitionLines(benchmark::State& state) {
  const DefectParameters p;
  const FieldConfig f(9.0 * Vec3(1, 1, 1).normalized(), Vec3(-1, -1, 1));
  for (auto _ : state) benchmark::DoNotOptimize(transition_lines(p, f));
}
BENCHMARK(BM_TransitionLines);

static void BM_GroundEigensolve(benchmark::State& state) {
  const DefectParameters p;
  const auto h = assemble_ground(p, FieldConfig::at_angle(5.0, 30.0));
  for (auto _ : state) benchmark::DoNotOptimize(eigensolve(h));
}
BENCHMARK(BM_GroundEigensolve);

static void BM_FieldSweep(benchmark::State& state) {
  const DefectParameters p;
  const auto b = linspace(0.0, 9.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(field_sweep(p, Vec3(-1, -1, 1), Vec3(1, 1, 1), b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FieldSweep)->Arg(19)->Arg(901);

static void BM_RenderSpectrum(benchmark::State& state) {
  const DefectParameters p;
  const auto lines = transition_lines(p, FieldConfig::at_angle(9.0, 109.47));
  const auto grid = linspace(-500.0, 500.0, static_cast<std::size_t>(state.range(0)));
  const LineProfile prof{LineProfile::Shape::lorentzian, 10.0};
  for (auto _ : state) benchmark::DoNotOptimize(render_spectrum(lines, prof, grid));
}
BENCHMARK(BM_RenderSpectrum)->Arg(2001)->Arg(20001);
