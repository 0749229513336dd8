#include "colorcenter/lorentzian_fit.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "colorcenter/errors.hpp"

namespace colorcenter {

double lorentzian_model(double x, double center, double fwhm, double amplitude, double offset) {
  const double hw = fwhm / 2.0;
  const double dx = x - center;
  return offset + amplitude * hw * hw / (dx * dx + hw * hw);
}

FitResult fit_lorentzian(const SpectrumTrace& trace, const LeastSquaresOptions& options) {
  trace.validate();
  const auto n = static_cast<Eigen::Index>(trace.size());
  if (n < 5) throw InputError("Lorentzian fit needs at least 5 samples");

  const auto& x = trace.x;
  const auto& y = trace.y;
  const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
  const double span = x.back() - x.front();
  if (*max_it - *min_it <= 0.0) throw NumericalError("no peak: trace is flat");

  // Center is fitted relative to the brightest sample so finite-difference
  // steps stay small against the linewidth on absolute frequency axes.
  const double x_ref = x[static_cast<std::size_t>(std::distance(y.begin(), max_it))];
  Eigen::VectorXd p0(4);
  p0 << 0.0, span / 2.0, *max_it - *min_it, *min_it;

  const auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      r[i] = lorentzian_model(x[k] - x_ref, p[0], p[1], p[2], p[3]) - y[k];
    }
  };

  LeastSquaresOptions opts = options;
  if (opts.parameter_scale.empty()) {
    const double yscale = std::max(std::abs(*max_it), std::abs(*min_it));
    opts.parameter_scale = {span, span, yscale, yscale};
  }
  const LeastSquaresResult ls = solve_least_squares(residual, p0, n, opts);

  FitResult fit;
  fit.names = {"center", "fwhm", "amplitude", "offset"};
  fit.values = {x_ref + ls.params[0], std::abs(ls.params[1]), ls.params[2], ls.params[3]};
  fit.std_errors.assign(ls.std_errors.data(), ls.std_errors.data() + ls.std_errors.size());
  fit.r_squared = r_squared(ls.residuals, y);
  fit.residual_norm = ls.residuals.norm();
  fit.iterations = ls.iterations;
  fit.degenerate = ls.rank_deficient;
  fit.converged = ls.converged && !ls.rank_deficient;
  fit.message = ls.stop_reason;

  const double rms = fit.residual_norm / std::sqrt(static_cast<double>(n));
  if (!(std::abs(fit.values[2]) >= 3.0 * rms) || fit.values[2] <= 0.0) {
    throw NumericalError("no peak: fitted amplitude is below three times the residual RMS");
  }
  return fit;
}

std::vector<double> lorentzian_curve(const FitResult& fit, std::span<const double> x) {
  const double c = fit.value("center");
  const double w = fit.value("fwhm");
  const double a = fit.value("amplitude");
  const double o = fit.value("offset");
  std::vector<double> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(lorentzian_model(v, c, w, a, o));
  return out;
}

double rms_drift_mhz(std::span<const double> peak_centers_ghz) {
  if (peak_centers_ghz.size() < 2) throw InputError("drift statistic needs at least two peak centers");
  double mean = 0.0;
  for (double v : peak_centers_ghz) mean += v;
  mean /= static_cast<double>(peak_centers_ghz.size());
  double ss = 0.0;
  for (double v : peak_centers_ghz) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(peak_centers_ghz.size())) * 1e3;
}

}  // namespace colorcenter
