#pragma once

#include <array>
#include <span>
#include <vector>

#include "colorcenter/defect_model.hpp"
#include "colorcenter/spectrum_trace.hpp"

namespace colorcenter {

/// How relative line strengths are assigned.
///
/// `spin_overlap` weights each line by sum over orbitals of
/// |<excited spinor | ground orbital component>|^2, so spin-flip lines vanish
/// when the field is along the defect axis. `uniform` sets every line to 1.
enum class IntensityModel { uniform, spin_overlap };

/// One optical emission line. freq_offset_ghz = E_excited - E_ground, which is
/// measured from the zero-field centroid because both Hamiltonians are traceless.
struct TransitionLine {
  double freq_offset_ghz = 0.0;
  double intensity = 0.0;
  int ground_index = 0;
  int excited_index = 0;

  /// Stable index excited_index * 4 + ground_index.
  [[nodiscard]] int line_index() const { return excited_index * 4 + ground_index; }
};

inline constexpr int kGroundDim = 4;
inline constexpr int kExcitedDim = 2;
inline constexpr int kLineCount = kGroundDim * kExcitedDim;

struct FieldSweep {
  std::vector<double> b_tesla;
  double angle_to_axis_deg = 0.0;
  std::vector<std::vector<TransitionLine>> lines_per_field;
};

struct LineProfile {
  enum class Shape { lorentzian, gaussian };
  Shape shape = Shape::lorentzian;
  double fwhm_ghz = 1.0;

  /// Unit-peak profile value at detuning `dx`.
  [[nodiscard]] double evaluate(double dx) const;
  /// Integral of the unit-peak profile over the real line.
  [[nodiscard]] double area() const;
};

/// Angle between two directions in degrees, [0, 180]. Throws InputError for zero vectors.
double orientation_angle_deg(const Vec3& field_dir, const Vec3& axis);

/// The eight ground-to-excited emission lines, ordered by line_index().
std::vector<TransitionLine> transition_lines(const DefectParameters& params, const FieldConfig& field,
                                             IntensityModel model = IntensityModel::spin_overlap);

/// Lines for each |B| in `b_values_tesla` with the field along `field_dir`.
/// Requires a nonempty, ascending list of field magnitudes.
FieldSweep field_sweep(const DefectParameters& params, const Vec3& axis, const Vec3& field_dir,
                       std::span<const double> b_values_tesla,
                       IntensityModel model = IntensityModel::spin_overlap);

/// The four <111> bond directions of diamond.
std::array<Vec3, 4> diamond_111_axes();

/// One sweep per <111> orientation family, each carrying weight 1/4.
std::vector<FieldSweep> orientation_ensemble(const DefectParameters& params, const Vec3& field_dir,
                                             std::span<const double> b_values_tesla,
                                             IntensityModel model = IntensityModel::spin_overlap);

/// Sum of profile-shaped peaks on `grid_ghz` (ascending), each scaled by line intensity.
SpectrumTrace render_spectrum(std::span<const TransitionLine> lines, const LineProfile& profile,
                              std::span<const double> grid_ghz);

/// Evenly spaced grid [lo, hi] with n points.
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace colorcenter
