#pragma once

#include <span>
#include <vector>

#include "colorcenter/least_squares.hpp"
#include "colorcenter/spectrum_trace.hpp"

namespace colorcenter {

/// offset + amplitude * (w/2)^2 / ((x - center)^2 + (w/2)^2)
double lorentzian_model(double x, double center, double fwhm, double amplitude, double offset);

/// Single-peak Lorentzian fit. Parameters: center, fwhm, amplitude, offset, all
/// in the trace's own units.
///
/// Starts from the brightest sample with a width of half the scanned span.
/// Throws InputError for fewer than 5 samples and NumericalError ("no peak")
/// when the fitted amplitude is below three times the residual RMS.
FitResult fit_lorentzian(const SpectrumTrace& trace, const LeastSquaresOptions& options = {});

/// Model curve for a fitted result on `x`.
std::vector<double> lorentzian_curve(const FitResult& fit, std::span<const double> x);

/// Population RMS deviation of peak centers (GHz) about their mean, in MHz.
/// Requires at least two entries.
double rms_drift_mhz(std::span<const double> peak_centers_ghz);

}  // namespace colorcenter
