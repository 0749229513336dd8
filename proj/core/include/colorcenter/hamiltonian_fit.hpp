#pragma once

#include <span>
#include <vector>

#include "colorcenter/defect_model.hpp"
#include "colorcenter/least_squares.hpp"

namespace colorcenter {

/// A measured emission peak: field magnitude and offset from the zero-field centroid.
struct PeakObservation {
  double b_tesla = 0.0;
  double freq_offset_ghz = 0.0;
};

struct HamiltonianFitOptions {
  /// Starting lambda and xi, plus every constant held fixed during the fit.
  DefectParameters initial;
  bool fit_lambda = true;
  bool fit_xi = true;
  Vec3 axis = Vec3(-1.0, -1.0, 1.0);
  Vec3 field_dir = Vec3(1.0, 1.0, 1.0);
  LeastSquaresOptions solver;
};

/// Distinct simulated line frequencies (ascending), merging lines closer than 1e-6 GHz.
std::vector<double> distinct_line_frequencies(const DefectParameters& params, const FieldConfig& field);

/// Index into `distinct` of the nearest simulated line for each measured peak.
/// Sets `ambiguous` when two peaks land on the same simulated line.
std::vector<std::size_t> assign_peaks(std::span<const double> measured, std::span<const double> distinct,
                                      bool& ambiguous);

/// Least-squares fit of lambda_soc and/or xi to measured peak positions using
/// the transition-line simulation as forward model. Peaks are re-assigned to
/// their nearest simulated line on every model evaluation.
///
/// Result names: lambda_soc, xi (only the free ones). xi is the combined
/// magnitude sqrt(xi_x^2 + xi_y^2); its direction is taken from `initial`.
/// `degenerate` is set when the data constrain only a combination of the free
/// parameters (e.g. zero-field peaks alone). Throws InputError on an
/// ambiguous final assignment or when there are fewer peaks than free parameters.
FitResult fit_hamiltonian_params(std::span<const PeakObservation> peaks, const HamiltonianFitOptions& options);

}  // namespace colorcenter
