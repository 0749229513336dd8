// Randomized invariants. Every generator is seeded so failures reproduce.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "colorcenter/decay_fit.hpp"
#include "colorcenter/eigensolve.hpp"
#include "colorcenter/lifetime_fit.hpp"
#include "colorcenter/lorentzian_fit.hpp"
#include "colorcenter/spectral_metrics.hpp"
#include "colorcenter/spectrum_simulator.hpp"
#include "colorcenter/stark.hpp"
#include "oracles/jacobi_eigen.hpp"

using namespace colorcenter;

namespace {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }
  Vec3 vec(double scale) { return {scale * normal(), scale * normal(), scale * normal()}; }
  Vec3 unit() {
    Vec3 v;
    do v = vec(1.0);
    while (v.norm() < 1e-3);
    return v.normalized();
  }
  DefectParameters params() {
    DefectParameters p;
    p.lambda_soc_ghz = uniform(0.0, 1500.0);
    p.xi_x_ghz = uniform(-50.0, 50.0);
    p.xi_y_ghz = uniform(-50.0, 50.0);
    p.ham_p = uniform(0.0, 1.0);
    p.delta_p = uniform(0.0, 0.3);
    p.g_l = uniform(0.0, 1.0);
    return p;
  }
  ComplexMatrix hermitian(int n, double scale) {
    ComplexMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = {scale * normal(), scale * normal()};
    return 0.5 * (a + a.adjoint());
  }
};

std::vector<double> sorted_freqs(const std::vector<TransitionLine>& lines) {
  std::vector<double> f;
  for (const auto& l : lines) f.push_back(l.freq_offset_ghz);
  std::sort(f.begin(), f.end());
  return f;
}

double exact_hermitian_defect(const ComplexMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("every builder is Hermitian") {
  Gen g(101);
  for (int k = 0; k < 300; ++k) {
    const auto p = g.params();
    const FieldConfig f(g.vec(5.0), g.unit());
    for (const auto& h : {h_so(p), h_jt(p), h_zeeman_orbital(p, f), h_zeeman_spin(p, f, 4), h_zeeman_spin(p, f, 2),
                          h_second_order_jt(p, f), assemble_ground(p, f), assemble_excited(p, f)}) {
      CHECK(exact_hermitian_defect(h.matrix()) == 0.0);
    }
  }
}

TEST_CASE("eigensolver residual below 1e-9 on 1000 random Hermitian matrices") {
  Gen g(202);
  double worst = 0.0;
  double worst_oracle = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int n = k % 2 ? 4 : 2;
    const double scale = std::pow(10.0, g.uniform(-3.0, 3.0));
    const ComplexMatrix a = g.hermitian(n, scale);
    const auto es = eigensolve(a);
    const double norm = a.norm();
    worst = std::max(worst, (a * es.vectors - es.vectors * es.values.asDiagonal()).norm() / norm);
    oracle::CMat o(static_cast<std::size_t>(n), std::vector<std::complex<double>>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) o[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j);
    const auto ref = oracle::jacobi_eigen(o);
    for (int i = 0; i < n; ++i)
      worst_oracle = std::max(worst_oracle, std::abs(es.values(i) - ref.values[static_cast<std::size_t>(i)]) / norm);
    CHECK(std::is_sorted(es.values.begin(), es.values.end()));
  }
  CHECK(worst < 1e-9);
  CHECK(worst_oracle < 1e-9);
}

TEST_CASE("zero-field ground levels follow the closed form for random couplings") {
  Gen g(303);
  for (int k = 0; k < 200; ++k) {
    const auto p = g.params();
    const auto es = eigensolve(assemble_ground(p, FieldConfig(Vec3::Zero(), g.unit())));
    const double half = 0.5 * std::sqrt(p.lambda_soc_ghz * p.lambda_soc_ghz + 4.0 * p.xi_ghz() * p.xi_ghz());
    CHECK(es.values(0) == doctest::Approx(-half).scale(1.0));
    CHECK(es.values(1) == doctest::Approx(-half).scale(1.0));
    CHECK(es.values(2) == doctest::Approx(half).scale(1.0));
    CHECK(es.values(3) == doctest::Approx(half).scale(1.0));
  }
}

TEST_CASE("Zeeman terms are odd in the field and linear in p") {
  Gen g(404);
  for (int k = 0; k < 100; ++k) {
    auto p = g.params();
    const Vec3 b = g.vec(4.0);
    const Vec3 axis = g.unit();
    const FieldConfig f(b, axis);
    const FieldConfig minus(-b, axis);
    CHECK((h_zeeman_spin(p, f, 4).matrix() + h_zeeman_spin(p, minus, 4).matrix()).norm() < 1e-12);
    CHECK((h_zeeman_orbital(p, f).matrix() + h_zeeman_orbital(p, minus).matrix()).norm() < 1e-12);
    CHECK((h_second_order_jt(p, f).matrix() + h_second_order_jt(p, minus).matrix()).norm() < 1e-12);
    const ComplexMatrix base = h_zeeman_orbital(p, f).matrix();
    p.ham_p *= 0.5;
    CHECK((2.0 * h_zeeman_orbital(p, f).matrix() - base).norm() < 1e-12);
  }
}

TEST_CASE("line frequencies are unchanged by a joint rotation of field and axis") {
  Gen g(505);
  for (int k = 0; k < 100; ++k) {
    const auto p = g.params();
    const Vec3 b = g.vec(4.0);
    const Vec3 axis = g.unit();
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(g.uniform(0, 6.3), g.unit()).toRotationMatrix();
    const auto a = sorted_freqs(transition_lines(p, FieldConfig(b, axis)));
    const auto r = sorted_freqs(transition_lines(p, FieldConfig(rot * b, rot * axis)));
    for (std::size_t i = 0; i < 8; ++i) CHECK(r[i] == doctest::Approx(a[i]).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("line frequencies are unchanged by rotating the field about the axis") {
  Gen g(606);
  for (int k = 0; k < 100; ++k) {
    const auto p = g.params();
    const Vec3 b = g.vec(4.0);
    const Vec3 axis = g.unit();
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(g.uniform(0, 6.3), axis).toRotationMatrix();
    const auto a = sorted_freqs(transition_lines(p, FieldConfig(b, axis)));
    const auto r = sorted_freqs(transition_lines(p, FieldConfig(rot * b, axis)));
    for (std::size_t i = 0; i < 8; ++i) CHECK(r[i] == doctest::Approx(a[i]).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("reversing the field leaves the line multiset unchanged") {
  Gen g(707);
  for (int k = 0; k < 100; ++k) {
    const auto p = g.params();
    const Vec3 b = g.vec(4.0);
    const Vec3 axis = g.unit();
    const auto a = sorted_freqs(transition_lines(p, FieldConfig(b, axis)));
    const auto r = sorted_freqs(transition_lines(p, FieldConfig(-b, axis)));
    for (std::size_t i = 0; i < 8; ++i) CHECK(r[i] == doctest::Approx(a[i]).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("always eight lines with intensities in [0, 1]") {
  Gen g(808);
  for (int k = 0; k < 200; ++k) {
    const auto p = g.params();
    const auto lines = transition_lines(p, FieldConfig(g.vec(5.0), g.unit()));
    REQUIRE(lines.size() == 8);
    double max_i = 0.0;
    for (const auto& l : lines) {
      CHECK(l.intensity >= 0.0);
      CHECK(l.intensity <= 1.0 + 1e-12);
      max_i = std::max(max_i, l.intensity);
    }
    CHECK(max_i == doctest::Approx(1.0));
  }
}

TEST_CASE("Debye-Waller factor is invariant under scaling") {
  Gen g(909);
  SpectrumTrace t;
  t.kind = AxisKind::wavelength_nm;
  for (int i = 0; i <= 2700; ++i) {
    t.x.push_back(850.0 + 0.1 * i);
    t.y.push_back(std::abs(g.normal()) + 50.0 * std::exp(-std::pow((t.x.back() - 884.0) / 0.3, 2)));
  }
  const double dw = debye_waller(t);
  for (int k = 0; k < 20; ++k) {
    SpectrumTrace s = t;
    const double c = std::pow(10.0, g.uniform(-6.0, 6.0));
    for (auto& y : s.y) y *= c;
    CHECK(debye_waller(s) == doctest::Approx(dw).epsilon(1e-12));
    const double zlo = g.uniform(882.0, 900.0);
    CHECK(debye_waller(s, {zlo, 1000.0}, {zlo, 1000.0}) == 1.0);
  }
}

TEST_CASE("Huang-Rhys inverts exp(-S) and the linewidth decreases with lifetime") {
  Gen g(1010);
  double prev = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const double s = g.uniform(0.0, 10.0);
    CHECK(huang_rhys(std::exp(-s)) == doctest::Approx(s).scale(1.0));
  }
  for (double tau = 0.1; tau < 100.0; tau *= 1.3) {
    const double w = lifetime_limited_linewidth_mhz(tau);
    CHECK(w < prev);
    prev = w;
  }
}

TEST_CASE("response correction round trips") {
  Gen g(1111);
  for (int k = 0; k < 20; ++k) {
    ResponseCurve r;
    for (int i = 0; i <= 10; ++i) {
      r.x.push_back(840.0 + 30.0 * i);
      r.efficiency.push_back(g.uniform(0.01, 1.0));
    }
    SpectrumTrace t;
    t.kind = AxisKind::wavelength_nm;
    for (int i = 0; i < 200; ++i) {
      t.x.push_back(850.0 + 1.2 * i);
      t.y.push_back(g.uniform(0.0, 1e4));
    }
    const auto back = apply_response(correct_response(t, r), r);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(back.y[i] - t.y[i]) <= 1e-12 * std::max(1.0, t.y[i]));
  }
}

TEST_CASE("Stark fit is odd under flipping the bias and dipole together") {
  Gen g(1212);
  for (int k = 0; k < 30; ++k) {
    StarkModel m;
    m.delta_mu = g.uniform(-1e-3, 1e-3);
    m.delta_alpha = g.uniform(-5e-4, 5e-4);
    std::vector<StarkPoint> pos;
    std::vector<StarkPoint> neg;
    for (int i = 0; i < 10; ++i) {
      const double v = -5.0 - 2.5 * i;
      const double y = stark_shift_ghz(local_field_mv_per_m(v, m), m) + 1e-4 * g.normal();
      pos.push_back({v, y, 0.0});
      neg.push_back({-v, y, 0.0});
    }
    const auto a = fit_stark(pos);
    const auto b = fit_stark(neg);
    CHECK(b.value("delta_mu") == doctest::Approx(-a.value("delta_mu")).scale(1e-9));
    CHECK(b.value("delta_alpha") == doctest::Approx(a.value("delta_alpha")).scale(1e-9));
    CHECK(b.std_error("delta_alpha") == doctest::Approx(a.std_error("delta_alpha")).epsilon(1e-6));
  }
}

TEST_CASE("unit conversions are linear") {
  Gen g(1313);
  for (int k = 0; k < 50; ++k) {
    const double a = g.uniform(-1e-3, 1e-3);
    const double b = g.uniform(-1e-3, 1e-3);
    const double c = g.uniform(-5.0, 5.0);
    CHECK(convert_dipole_to_debye(a + c * b) ==
          doctest::Approx(convert_dipole_to_debye(a) + c * convert_dipole_to_debye(b)).scale(1e-12));
    CHECK(convert_polarizability_to_a3(a + c * b) ==
          doctest::Approx(convert_polarizability_to_a3(a) + c * convert_polarizability_to_a3(b)).scale(1e-6));
  }
}

TEST_CASE("adding a constant to a Lorentzian trace only moves the offset") {
  Gen g(1414);
  for (int k = 0; k < 30; ++k) {
    SpectrumTrace t;
    const double center = g.uniform(-10, 10);
    const double fwhm = g.uniform(5, 30);
    for (int i = 0; i < 300; ++i) {
      t.x.push_back(-80.0 + 160.0 * i / 299.0);
      t.y.push_back(lorentzian_model(t.x.back(), center, fwhm, 100.0, 5.0) + g.normal());
    }
    const double shift = g.uniform(-1000, 1000);
    SpectrumTrace s = t;
    for (auto& y : s.y) y += shift;
    const auto a = fit_lorentzian(t);
    const auto b = fit_lorentzian(s);
    CHECK(b.value("fwhm") == doctest::Approx(a.value("fwhm")).epsilon(1e-6));
    CHECK(b.value("center") == doctest::Approx(a.value("center")).scale(1.0).epsilon(1e-6));
    CHECK(b.value("offset") - a.value("offset") == doctest::Approx(shift).epsilon(1e-6));
  }
}

TEST_CASE("fitters reproduce the parameters that generated their data") {
  Gen g(1515);
  for (int k = 0; k < 20; ++k) {
    const double c = g.uniform(-20, 20);
    const double w = g.uniform(4, 40);
    const double amp = g.uniform(1, 1e4);
    const double off = g.uniform(0, 100);
    SpectrumTrace t;
    for (int i = 0; i < 200; ++i) {
      t.x.push_back(-100.0 + i);
      t.y.push_back(lorentzian_model(t.x.back(), c, w, amp, off));
    }
    const auto f = fit_lorentzian(t);
    CHECK(f.value("fwhm") == doctest::Approx(w).epsilon(1e-6));
    CHECK(f.value("center") == doctest::Approx(c).scale(1.0).epsilon(1e-6));
  }
  for (int k = 0; k < 20; ++k) {
    const double t1 = g.uniform(0.5, 5.0);
    const double t2 = t1 * g.uniform(8.0, 40.0);
    const double a1 = g.uniform(0.2, 1.0);
    const double a2 = g.uniform(0.2, 1.0);
    const double base = g.uniform(0.0, 0.1);
    TimeTrace tr;
    for (int i = 0; i < 800; ++i) {
      const double t = (6.0 * t2 / 800.0) * i;
      tr.t.push_back(t);
      tr.y.push_back(a1 * std::exp(-t / t1) + a2 * std::exp(-t / t2) + base);
    }
    DecayFitOptions o;
    o.n_components = 2;
    const auto f = fit_decay(tr, o);
    CHECK(f.converged);
    CHECK(f.value("tau_1") == doctest::Approx(t1).epsilon(1e-4));
    CHECK(f.value("tau_2") == doctest::Approx(t2).epsilon(1e-4));
  }
  for (int k = 0; k < 20; ++k) {
    const double tau = g.uniform(1.0, 20.0);
    const double fwhm = g.uniform(0.2, 1.0);
    TimeTrace tr;
    for (int i = 0; i < 1500; ++i) {
      const double t = 0.05 * i;
      tr.t.push_back(t);
      tr.y.push_back(convolved_exponential(t, tau, 1e3, 4.0, fwhm / kGaussianFwhmPerSigma, 2.0));
    }
    LifetimeFitOptions o;
    o.irf_fwhm = fwhm;
    const auto f = fit_lifetime_irf(tr, o);
    CHECK(f.value("tau") == doctest::Approx(tau).epsilon(1e-5));
  }
  for (int k = 0; k < 20; ++k) {
    StarkModel m;
    m.delta_mu = g.uniform(-1e-3, 1e-3);
    m.delta_alpha = g.uniform(-5e-4, 5e-4);
    std::vector<StarkPoint> pts;
    for (int i = 0; i < 8; ++i) {
      const double v = -3.0 * (i + 1);
      pts.push_back({v, stark_shift_ghz(local_field_mv_per_m(v, m), m), 0.0});
    }
    const auto f = fit_stark(pts);
    CHECK(f.value("delta_mu") == doctest::Approx(m.delta_mu).scale(1e-9));
    CHECK(f.value("delta_alpha") == doctest::Approx(m.delta_alpha).scale(1e-10));
  }
}

TEST_CASE("finite-difference Jacobian matches an analytic gradient") {
  Gen g(1616);
  for (int k = 0; k < 30; ++k) {
    const double tau = g.uniform(1.0, 20.0);
    const double sigma = g.uniform(0.05, 1.0);
    const double t = g.uniform(-2.0, 40.0);
    // d/dA of the convolved exponential is the model with unit amplitude.
    const ResidualFunction f = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
      r[0] = convolved_exponential(t, tau, p[0], 0.0, sigma, 0.0);
    };
    const auto jac = numeric_jacobian(f, Eigen::VectorXd::Constant(1, 3.0), 1, {});
    CHECK(jac(0, 0) == doctest::Approx(convolved_exponential(t, tau, 1.0, 0.0, sigma, 0.0)).epsilon(1e-7));
  }
}
