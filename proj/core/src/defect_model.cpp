#include "colorcenter/defect_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "colorcenter/errors.hpp"

namespace colorcenter {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

constexpr double kHermitianTolerance = 1e-12;

// sigma_z on the spin index, identity on the orbital index.
ComplexMatrix spin_z_4() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  m(2, 2) = 1.0;
  m(3, 3) = -1.0;
  return m;
}

}  // namespace

double DefectParameters::xi_ghz() const { return std::hypot(xi_x_ghz, xi_y_ghz); }

double DefectParameters::zero_field_splitting_ghz() const {
  const double xi = xi_ghz();
  return std::sqrt(lambda_soc_ghz * lambda_soc_ghz + 4.0 * xi * xi);
}

void DefectParameters::validate() const {
  for (double v : {lambda_soc_ghz, xi_x_ghz, xi_y_ghz, ham_p, delta_p, g_l, gamma_l_ghz_per_t,
                   gamma_s_ghz_per_t}) {
    if (!std::isfinite(v)) throw InputError("defect parameters must be finite");
  }
  if (lambda_soc_ghz < 0.0) throw InputError("lambda_soc must be >= 0");
  if (ham_p < 0.0 || ham_p > 1.0) throw InputError("ham_p must lie in [0, 1]");
}

FieldConfig::FieldConfig(const Vec3& b_lab_tesla, const Vec3& axis) : b_lab_(b_lab_tesla) {
  if (!b_lab_tesla.allFinite() || !axis.allFinite()) throw InputError("field geometry must be finite");
  const double n = axis.norm();
  if (n == 0.0) throw InputError("defect axis must be a nonzero vector");
  axis_ = axis / n;
}

FieldConfig FieldConfig::at_angle(double b_tesla, double angle_deg) {
  const double theta = angle_deg * constants::kPi / 180.0;
  return FieldConfig(Vec3(b_tesla * std::sin(theta), 0.0, b_tesla * std::cos(theta)), Vec3::UnitZ());
}

Vec3 FieldConfig::defect_frame() const {
  const Vec3& z = axis_;
  // Helper direction least aligned with the axis.
  Vec3 helper = Vec3::UnitX();
  if (std::abs(z.x()) > 0.9) helper = Vec3::UnitY();
  const Vec3 x = (helper - helper.dot(z) * z).normalized();
  const Vec3 y = z.cross(x);
  return {b_lab_.dot(x), b_lab_.dot(y), b_lab_.dot(z)};
}

HermitianMatrix::HermitianMatrix(int dim) {
  if (dim != 2 && dim != 4) throw InputError("Hermitian matrix dimension must be 2 or 4");
  m_ = ComplexMatrix::Zero(dim, dim);
}

HermitianMatrix::HermitianMatrix(ComplexMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw InputError("Hermitian matrix must be square");
  if (m_.rows() != 2 && m_.rows() != 4) throw InputError("Hermitian matrix dimension must be 2 or 4");
  if (!m_.allFinite()) throw InputError("Hermitian matrix entries must be finite");
  const double defect = hermiticity_defect(m_);
  if (defect > kHermitianTolerance) {
    throw InputError("matrix is not Hermitian (relative defect " + std::to_string(defect) + ")");
  }
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  if (other.dim() != dim()) throw InputError("dimension mismatch in Hermitian sum");
  m_ += other.m_;
  return *this;
}

double HermitianMatrix::hermiticity_defect(const ComplexMatrix& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

HermitianMatrix h_so(const DefectParameters& params) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  const double half = params.lambda_soc_ghz / 2.0;
  m(0, 2) = -kI * half;
  m(1, 3) = kI * half;
  m(2, 0) = kI * half;
  m(3, 1) = -kI * half;
  return HermitianMatrix(std::move(m));
}

HermitianMatrix h_jt(const DefectParameters& params) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  const double xx = params.xi_x_ghz;
  const double xy = params.xi_y_ghz;
  m(0, 0) = xx;
  m(1, 1) = xx;
  m(2, 2) = -xx;
  m(3, 3) = -xx;
  m(0, 2) = xy;
  m(2, 0) = xy;
  m(1, 3) = xy;
  m(3, 1) = xy;
  return HermitianMatrix(std::move(m));
}

HermitianMatrix h_zeeman_orbital(const DefectParameters& params, const FieldConfig& field) {
  const double bz = field.defect_frame().z();
  const double s = params.ham_p * params.gamma_l_ghz_per_t * bz;
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 2) = kI * s;
  m(1, 3) = kI * s;
  m(2, 0) = -kI * s;
  m(3, 1) = -kI * s;
  return HermitianMatrix(std::move(m));
}

HermitianMatrix h_zeeman_spin(const DefectParameters& params, const FieldConfig& field, int dim) {
  if (dim != 2 && dim != 4) throw InputError("spin Zeeman dimension must be 2 or 4, got " + std::to_string(dim));
  const Vec3 b = field.defect_frame();
  const double g = params.gamma_s_ghz_per_t;
  ComplexMatrix block(2, 2);
  block(0, 0) = g * b.z();
  block(0, 1) = g * cd(b.x(), -b.y());
  block(1, 0) = g * cd(b.x(), b.y());
  block(1, 1) = -g * b.z();
  if (dim == 2) return HermitianMatrix(std::move(block));
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m.block(0, 0, 2, 2) = block;
  m.block(2, 2, 2, 2) = block;
  return HermitianMatrix(std::move(m));
}

HermitianMatrix h_second_order_jt(const DefectParameters& params, const FieldConfig& field) {
  const double bz = field.defect_frame().z();
  const double s = 2.0 * params.delta_p * params.g_l * params.gamma_l_ghz_per_t * bz;
  return HermitianMatrix(ComplexMatrix(s * spin_z_4()));
}

HermitianMatrix assemble_ground(const DefectParameters& params, const FieldConfig& field) {
  return h_so(params) + h_jt(params) + h_second_order_jt(params, field) + h_zeeman_orbital(params, field) +
         h_zeeman_spin(params, field, 4);
}

HermitianMatrix assemble_excited(const DefectParameters& params, const FieldConfig& field) {
  return h_zeeman_spin(params, field, 2);
}

}  // namespace colorcenter
