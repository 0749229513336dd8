#pragma once

#include <complex>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "colorcenter/constants.hpp"

namespace colorcenter {

using Vec3 = Eigen::Vector3d;
using ComplexMatrix = Eigen::MatrixXcd;

/// Coupling constants of the D3d orbital-doublet / orbital-singlet model.
///
/// Energies are in GHz, gyromagnetic ratios in GHz/T. The defaults are the
/// values that reproduce the measured NiV- magneto-optical map: spin-orbit
/// 672 GHz, Jahn-Teller 8 GHz, Ham factor 0.124, second-order JT 0.0839 and
/// Stevens factor 0.7821.
struct DefectParameters {
  double lambda_soc_ghz = 672.0;
  double xi_x_ghz = 8.0;
  double xi_y_ghz = 0.0;
  double ham_p = 0.124;
  double delta_p = 0.0839;
  double g_l = 0.7821;
  double gamma_l_ghz_per_t = constants::kBohrMagnetonGHzPerTesla;
  double gamma_s_ghz_per_t = 2.0 * constants::kBohrMagnetonGHzPerTesla;

  /// Combined Jahn-Teller strength sqrt(xi_x^2 + xi_y^2).
  [[nodiscard]] double xi_ghz() const;

  /// Zero-field ground-state splitting sqrt(lambda^2 + 4 xi^2).
  [[nodiscard]] double zero_field_splitting_ghz() const;

  /// Throws InputError when lambda < 0, p outside [0, 1] or a value is not finite.
  void validate() const;
};

/// Lab-frame magnetic field together with the defect's high-symmetry axis.
///
/// The defect frame has z along the (normalized) axis. x and y complete a
/// right-handed frame; the Hamiltonian is invariant under rotations of the
/// field about z, so the azimuthal choice of x does not affect energies.
class FieldConfig {
 public:
  FieldConfig(const Vec3& b_lab_tesla, const Vec3& axis);

  /// Field of magnitude `b_tesla` at `angle_deg` to the defect axis, in the xz plane.
  static FieldConfig at_angle(double b_tesla, double angle_deg);

  [[nodiscard]] const Vec3& b_lab() const { return b_lab_; }
  [[nodiscard]] const Vec3& axis() const { return axis_; }

  /// (Bx, By, Bz) in the defect frame, Tesla.
  [[nodiscard]] Vec3 defect_frame() const;

 private:
  Vec3 b_lab_;
  Vec3 axis_;
};

/// Square complex matrix of dimension 2 or 4 that is Hermitian to within
/// 1e-12 relative tolerance. Entries in GHz.
class HermitianMatrix {
 public:
  /// Zero matrix of the given dimension.
  explicit HermitianMatrix(int dim);

  /// Validates squareness, dimension and Hermiticity; throws InputError.
  explicit HermitianMatrix(ComplexMatrix entries);

  [[nodiscard]] int dim() const { return static_cast<int>(m_.rows()); }
  [[nodiscard]] const ComplexMatrix& matrix() const { return m_; }
  [[nodiscard]] std::complex<double> operator()(int i, int j) const { return m_(i, j); }

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) {
    a.m_ *= s;
    return a;
  }

  /// Largest |H_ij - conj(H_ji)| relative to the largest entry magnitude.
  [[nodiscard]] static double hermiticity_defect(const ComplexMatrix& m);

 private:
  ComplexMatrix m_;
};

// Basis ordering for every 4x4 matrix: |ex up>, |ex dn>, |ey up>, |ey dn>.
// Excited-state 2x2 matrices act on |a1g up>, |a1g dn>.

/// Spin-orbit term: (lambda/2) * [[0,0,-i,0],[0,0,0,i],[i,0,0,0],[0,-i,0,0]].
HermitianMatrix h_so(const DefectParameters& params);

/// Jahn-Teller term with xi_x on the orbital diagonal and xi_y off-diagonal.
HermitianMatrix h_jt(const DefectParameters& params);

/// Quenched orbital Zeeman term p * gamma_L * Bz; only Bz enters.
HermitianMatrix h_zeeman_orbital(const DefectParameters& params, const FieldConfig& field);

/// Spin Zeeman term gamma_S * (B . sigma). dim 4 tensors with the orbital
/// identity, dim 2 is the bare spin block. Throws InputError for other dims.
HermitianMatrix h_zeeman_spin(const DefectParameters& params, const FieldConfig& field, int dim);

/// Second-order Jahn-Teller correction 2 * delta_p * g_L * gamma_L * Bz * sigma_z.
/// gamma_L is inserted so the term carries GHz.
HermitianMatrix h_second_order_jt(const DefectParameters& params, const FieldConfig& field);

HermitianMatrix assemble_ground(const DefectParameters& params, const FieldConfig& field);
HermitianMatrix assemble_excited(const DefectParameters& params, const FieldConfig& field);

}  // namespace colorcenter
