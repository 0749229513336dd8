#pragma once

#include <optional>
#include <span>
#include <vector>

#include "colorcenter/least_squares.hpp"

namespace colorcenter {

/// Intensity samples on an ascending time axis (any time unit; fitted
/// constants come back in the same unit).
struct TimeTrace {
  std::vector<double> t;
  std::vector<double> y;

  void validate() const;
};

/// Multi-exponential decay: baseline + sum_k amplitude_k * exp(-(t - t_ref) / tau_k).
struct DecayModel {
  std::vector<double> amplitudes;
  std::vector<double> time_constants;
  double baseline = 0.0;
  double t_ref = 0.0;

  [[nodiscard]] double operator()(double t) const;
};

struct DecayFitOptions {
  int n_components = 1;
  /// Samples outside [window_start, window_end] are ignored; amplitudes refer
  /// to the first retained sample time.
  std::optional<double> window_start;
  std::optional<double> window_end;
  LeastSquaresOptions solver;
};

/// Fits one or two exponential components plus a baseline.
///
/// Parameter names are amplitude/tau/baseline for one component and
/// amplitude_1/tau_1/amplitude_2/tau_2/baseline for two, with tau_1 < tau_2.
/// Initial time constants come from log-linear regression on the tail.
/// An unidentifiable decay (e.g. a constant trace) comes back with converged = false.
FitResult fit_decay(const TimeTrace& trace, const DecayFitOptions& options = {});

/// Rebuilds the model from a fit_decay result; t_ref is the fit window start.
DecayModel decay_model_from_fit(const FitResult& fit, double t_ref);

}  // namespace colorcenter
