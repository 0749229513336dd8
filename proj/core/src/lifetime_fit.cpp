#include "colorcenter/lifetime_fit.hpp"

#include <algorithm>
#include <cmath>

#include "colorcenter/constants.hpp"
#include "colorcenter/errors.hpp"

namespace colorcenter {

namespace {

// exp(z^2) erfc(z) for z >= 0.
double erfcx(double z) {
  if (z < 26.0) return std::exp(z * z) * std::erfc(z);
  const double inv2 = 1.0 / (2.0 * z * z);
  return 1.0 / (z * std::sqrt(constants::kPi)) * (1.0 - inv2 + 3.0 * inv2 * inv2 - 15.0 * inv2 * inv2 * inv2);
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

}  // namespace

double convolved_exponential(double t, double tau, double amplitude, double t0, double sigma, double baseline) {
  const double u = t - t0;
  if (sigma <= 0.0) return baseline + (u >= 0.0 ? amplitude * std::exp(-u / tau) : 0.0);
  const double z = (sigma / tau - u / sigma) / std::sqrt(2.0);
  double core = 0.0;
  if (z < 5.0) {
    core = 0.5 * std::exp(0.5 * sigma * sigma / (tau * tau) - u / tau) * std::erfc(z);
  } else {
    core = 0.5 * std::exp(-0.5 * u * u / (sigma * sigma)) * erfcx(z);
  }
  return baseline + amplitude * core;
}

FitResult fit_lifetime_irf(const TimeTrace& histogram, const LifetimeFitOptions& options) {
  histogram.validate();
  const auto& t = histogram.t;
  const auto& y = histogram.y;
  if (t.size() < 6) throw InputError("lifetime fit needs at least 6 histogram bins");
  if (options.irf_fwhm < 0.0) throw InputError("IRF FWHM must be nonnegative");
  if (options.fit_irf_width && options.irf_fwhm <= 0.0) throw InputError("fitting the IRF width needs a starting FWHM");

  double bin = t[1] - t[0];
  for (std::size_t i = 2; i < t.size(); ++i) bin = std::min(bin, t[i] - t[i - 1]);
  if (options.irf_fwhm > 0.0 && !(bin < options.irf_fwhm)) {
    throw InputError("histogram bin width must be smaller than the IRF FWHM");
  }
  const double sigma0 = options.irf_fwhm / kGaussianFwhmPerSigma;

  const auto peak_it = std::max_element(y.begin(), y.end());
  const auto peak = static_cast<std::size_t>(peak_it - y.begin());
  const double t_peak = t[peak];

  std::vector<double> early;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_peak - 5.0 * sigma0 - 2.0 * bin) early.push_back(y[i]);
  }
  const double base0 = early.size() >= 3 ? median(early) : *std::min_element(y.begin(), y.end());
  const double amp0 = std::max(*peak_it - base0, 1e-12);

  // Log-linear tail regression for the starting lifetime.
  double tau0 = (t.back() - t_peak) / 3.0;
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = peak; i < t.size(); ++i) {
      if (t[i] < t_peak + 3.0 * sigma0) continue;
      const double ex = y[i] - base0;
      if (!(ex > 0.05 * amp0)) continue;
      const double ly = std::log(ex);
      sx += t[i];
      sy += ly;
      sxx += t[i] * t[i];
      sxy += t[i] * ly;
      ++n;
    }
    const double denom = n * sxx - sx * sx;
    if (n >= 3 && denom > 0.0) {
      const double slope = (n * sxy - sx * sy) / denom;
      if (slope < 0.0) tau0 = -1.0 / slope;
    }
  }
  tau0 = std::max(tau0, bin);

  // Parameter vector: [log tau, amplitude, baseline, (t0), (log sigma)].
  // Without an IRF the onset t0 is degenerate with the amplitude, so it is
  // pinned to the peak bin.
  const bool fit_t0 = sigma0 > 0.0;
  const Eigen::Index i_t0 = fit_t0 ? 3 : -1;
  const Eigen::Index i_sigma = options.fit_irf_width ? (fit_t0 ? 4 : 3) : -1;
  const Eigen::Index np = 3 + (fit_t0 ? 1 : 0) + (options.fit_irf_width ? 1 : 0);
  Eigen::VectorXd p0(np);
  p0[0] = std::log(tau0);
  p0[1] = amp0;
  p0[2] = base0;
  if (fit_t0) p0[i_t0] = t_peak;
  if (i_sigma >= 0) p0[i_sigma] = std::log(sigma0);

  const auto m = static_cast<Eigen::Index>(t.size());
  const auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    const double tau = std::exp(p[0]);
    const double t0 = fit_t0 ? p[i_t0] : t_peak;
    const double sigma = i_sigma >= 0 ? std::exp(p[i_sigma]) : sigma0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      r[i] = convolved_exponential(t[k], tau, p[1], t0, sigma, p[2]) - y[k];
    }
  };

  LeastSquaresOptions opts = options.solver;
  if (opts.parameter_scale.empty()) {
    opts.parameter_scale = {1.0, amp0, std::max({amp0, std::abs(base0)})};
    if (fit_t0) opts.parameter_scale.push_back(std::max(sigma0, bin));
    if (i_sigma >= 0) opts.parameter_scale.push_back(1.0);
  }
  const LeastSquaresResult ls = solve_least_squares(residual, p0, m, opts);

  const double tau = std::exp(ls.params[0]);
  if (tau < bin) throw NumericalError("lifetime is not identifiable: fitted tau is shorter than one bin");

  FitResult fit;
  fit.names = {"tau", "amplitude", "t0", "baseline"};
  fit.values = {tau, ls.params[1], fit_t0 ? ls.params[i_t0] : t_peak, ls.params[2]};
  fit.std_errors = {tau * ls.std_errors[0], ls.std_errors[1], fit_t0 ? ls.std_errors[i_t0] : 0.0, ls.std_errors[2]};
  if (i_sigma >= 0) {
    const double sigma = std::exp(ls.params[i_sigma]);
    fit.names.emplace_back("irf_fwhm");
    fit.values.push_back(sigma * kGaussianFwhmPerSigma);
    fit.std_errors.push_back(sigma * kGaussianFwhmPerSigma * ls.std_errors[i_sigma]);
  }
  fit.r_squared = r_squared(ls.residuals, y);
  fit.residual_norm = ls.residuals.norm();
  fit.iterations = ls.iterations;
  fit.degenerate = ls.rank_deficient;
  fit.converged = ls.converged && !ls.rank_deficient;
  fit.message = ls.stop_reason;
  return fit;
}

std::vector<double> lifetime_curve(const FitResult& fit, double irf_fwhm, std::span<const double> t) {
  double fwhm = irf_fwhm;
  for (const auto& n : fit.names) {
    if (n == "irf_fwhm") fwhm = fit.value("irf_fwhm");
  }
  const double sigma = fwhm / kGaussianFwhmPerSigma;
  std::vector<double> out;
  out.reserve(t.size());
  for (double v : t) {
    out.push_back(convolved_exponential(v, fit.value("tau"), fit.value("amplitude"), fit.value("t0"), sigma,
                                        fit.value("baseline")));
  }
  return out;
}

}  // namespace colorcenter
