#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "colorcenter/decay_fit.hpp"
#include "colorcenter/hamiltonian_fit.hpp"
#include "colorcenter/lifetime_fit.hpp"
#include "colorcenter/lorentzian_fit.hpp"
#include "colorcenter/stark.hpp"

using namespace colorcenter;

static void BM_LorentzianFit(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0.0, 0.05);
  SpectrumTrace t;
  for (int i = 0; i < 1001; ++i) {
    t.x.push_back(-50.0 + 0.1 * i);
    t.y.push_back(lorentzian_model(t.x.back(), 2.0, 16.0, 1.0, 0.02) + nd(rng));
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_lorentzian(t));
}
BENCHMARK(BM_LorentzianFit);

static void BM_StarkFit(benchmark::State& state) {
  StarkModel m;
  m.delta_alpha = -2.1e-4;
  std::vector<StarkPoint> pts;
  for (int i = 0; i < 12; ++i) {
    const double v = -5.0 - 25.0 * i / 11.0;
    pts.push_back({v, stark_shift_ghz(local_field_mv_per_m(v, m), m) + 1e-5 * (i % 3), 0.0});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_stark(pts));
}
BENCHMARK(BM_StarkFit);

static void BM_BiexponentialDecay(benchmark::State& state) {
  TimeTrace t;
  for (int i = 0; i < 801; ++i) {
    t.t.push_back(0.25 * i);
    t.y.push_back(6000.0 * std::exp(-t.t.back() / 1.6) + 4000.0 * std::exp(-t.t.back() / 42.0));
  }
  DecayFitOptions o;
  o.n_components = 2;
  for (auto _ : state) benchmark::DoNotOptimize(fit_decay(t, o));
}
BENCHMARK(BM_BiexponentialDecay);

static void BM_LifetimeIrf(benchmark::State& state) {
  TimeTrace t;
  for (int i = 0; i < 1201; ++i) {
    t.t.push_back(0.05 * i);
    t.y.push_back(convolved_exponential(t.t.back(), 10.43, 1e4, 5.0, 0.53 / kGaussianFwhmPerSigma, 5.0));
  }
  LifetimeFitOptions o;
  o.irf_fwhm = 0.53;
  for (auto _ : state) benchmark::DoNotOptimize(fit_lifetime_irf(t, o));
}
BENCHMARK(BM_LifetimeIrf);

static void BM_HamiltonianFit(benchmark::State& state) {
  const DefectParameters truth;
  std::vector<PeakObservation> peaks;
  for (double b : {0.0, 3.0, 6.0, 9.0}) {
    const FieldConfig f(b * Vec3(1, 1, 1).normalized(), Vec3(-1, -1, 1));
    for (double v : distinct_line_frequencies(truth, f)) peaks.push_back({b, v});
  }
  HamiltonianFitOptions o;
  o.initial.lambda_soc_ghz = 640.0;
  o.initial.xi_x_ghz = 6.0;
  for (auto _ : state) benchmark::DoNotOptimize(fit_hamiltonian_params(peaks, o));
}
BENCHMARK(BM_HamiltonianFit);
