#pragma once

#include <optional>
#include <span>
#include <vector>

#include "colorcenter/least_squares.hpp"

namespace colorcenter {

/// Quadratic Stark model dE = -delta_mu * F - 0.5 * delta_alpha * F^2 with F the
/// Lorentz local field inside a dielectric slab biased across its thickness.
struct StarkModel {
  double delta_mu = 0.0;              // GHz / (MV/m)
  double delta_alpha = 0.0;           // GHz / (MV/m)^2
  double epsilon_r = 5.7;             // diamond
  double junction_thickness_m = 3.5e-6;

  void validate() const;
};

/// Internal field (V/d) * (eps + 2) / 3 in MV/m. Sign follows the bias.
double local_field_mv_per_m(double v_bias, const StarkModel& model);

/// Transition shift in GHz at internal field F (MV/m).
double stark_shift_ghz(double field_mv_per_m, const StarkModel& model);

struct StarkPoint {
  double voltage_v = 0.0;
  double peak_freq_ghz = 0.0;
  double sigma_ghz = 0.0;  // 0 means unweighted
};

struct StarkFitOptions {
  double epsilon_r = 5.7;
  double junction_thickness_m = 3.5e-6;
  /// Peak frequencies are shifted by the frequency of this point before fitting.
  std::optional<std::size_t> reference_index;
  /// Fit a constant offset alongside delta_mu and delta_alpha.
  bool fit_offset = true;
  LeastSquaresOptions solver;
};

/// Weighted least-squares fit of the quadratic Stark model through the local field.
/// Result parameters: delta_mu, delta_alpha (and offset when enabled).
/// Throws InputError for fewer than 3 points or fewer than 3 distinct voltages.
FitResult fit_stark(std::span<const StarkPoint> points, const StarkFitOptions& options = {});

/// GHz/(MV/m) to Debye: 1 D x 1 MV/m / h = 5.0341 GHz.
double convert_dipole_to_debye(double delta_mu_ghz_per_mv_m);
double convert_debye_to_dipole(double debye);

/// GHz/(MV/m)^2 to polarizability volume in cubic Angstrom, using
/// 1 A^3 -> 0.5 * 4 pi eps0 1e-30 (1e6)^2 / h GHz/(MV/m)^2.
double convert_polarizability_to_a3(double delta_alpha_ghz_per_mv_m2);
double convert_a3_to_polarizability(double a3);

}  // namespace colorcenter
