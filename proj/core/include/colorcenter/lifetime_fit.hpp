#pragma once

#include <span>
#include <vector>

#include "colorcenter/decay_fit.hpp"
#include "colorcenter/least_squares.hpp"

namespace colorcenter {

inline constexpr double kGaussianFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

/// baseline + amplitude * (H(t - t0) exp(-(t - t0) / tau)) convolved with a
/// unit-area Gaussian of standard deviation `sigma`. sigma = 0 gives the bare
/// one-sided exponential.
double convolved_exponential(double t, double tau, double amplitude, double t0, double sigma, double baseline);

struct LifetimeFitOptions {
  /// Gaussian IRF full width at half maximum, same unit as the time axis. 0 disables the IRF.
  double irf_fwhm = 0.0;
  /// Free the IRF width instead of holding it at irf_fwhm.
  bool fit_irf_width = false;
  LeastSquaresOptions solver;
};

/// Forward-convolution fit of a TCSPC histogram. Parameters: tau, amplitude,
/// t0, baseline (and irf_fwhm when fitted).
///
/// Throws InputError when the bin width is not below a nonzero irf_fwhm and
/// NumericalError when the fitted tau is shorter than one bin.
FitResult fit_lifetime_irf(const TimeTrace& histogram, const LifetimeFitOptions& options);

std::vector<double> lifetime_curve(const FitResult& fit, double irf_fwhm, std::span<const double> t);

}  // namespace colorcenter
