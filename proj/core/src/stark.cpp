#include "colorcenter/stark.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "colorcenter/constants.hpp"
#include "colorcenter/errors.hpp"

namespace colorcenter {

namespace {

// 1 D * 1 MV/m / h, in GHz.
const double kDebyeMvPerMToGHz = constants::kDebye * 1e6 / constants::kPlanck * 1e-9;

// 0.5 * 4 pi eps0 * 1 A^3 * (1 MV/m)^2 / h, in GHz.
const double kA3ToGHz =
    0.5 * 4.0 * constants::kPi * constants::kVacuumPermittivity * 1e-30 * 1e12 / constants::kPlanck * 1e-9;

}  // namespace

void StarkModel::validate() const {
  if (!(epsilon_r > 1.0)) throw InputError("relative permittivity must exceed 1");
  if (!(junction_thickness_m > 0.0)) throw InputError("junction thickness must be positive");
}

double local_field_mv_per_m(double v_bias, const StarkModel& model) {
  model.validate();
  const double external = v_bias / model.junction_thickness_m * 1e-6;
  return external * (model.epsilon_r + 2.0) / 3.0;
}

double stark_shift_ghz(double field_mv_per_m, const StarkModel& model) {
  return -model.delta_mu * field_mv_per_m - 0.5 * model.delta_alpha * field_mv_per_m * field_mv_per_m;
}

FitResult fit_stark(std::span<const StarkPoint> points, const StarkFitOptions& options) {
  if (points.size() < 3) throw InputError("Stark fit needs at least 3 points");
  StarkModel geometry;
  geometry.epsilon_r = options.epsilon_r;
  geometry.junction_thickness_m = options.junction_thickness_m;
  geometry.validate();

  std::vector<double> volts;
  for (const auto& p : points) {
    if (!std::isfinite(p.voltage_v) || !std::isfinite(p.peak_freq_ghz) || p.sigma_ghz < 0.0) {
      throw InputError("Stark points must be finite with nonnegative sigma");
    }
    volts.push_back(p.voltage_v);
  }
  std::sort(volts.begin(), volts.end());
  const auto distinct = std::unique(volts.begin(), volts.end()) - volts.begin();
  if (distinct < 3) throw InputError("Stark fit is rank deficient: fewer than 3 distinct voltages");

  double reference = 0.0;
  if (options.reference_index) {
    if (*options.reference_index >= points.size()) throw InputError("Stark reference index out of range");
    reference = points[*options.reference_index].peak_freq_ghz;
  }

  const auto m = static_cast<Eigen::Index>(points.size());
  const Eigen::Index np = options.fit_offset ? 3 : 2;
  std::vector<double> field(points.size());
  std::vector<double> shift(points.size());
  Eigen::VectorXd weight(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    field[k] = local_field_mv_per_m(points[k].voltage_v, geometry);
    shift[k] = points[k].peak_freq_ghz - reference;
    weight[i] = points[k].sigma_ghz > 0.0 ? 1.0 / points[k].sigma_ghz : 1.0;
  }

  // Starting point from ordinary (weighted) quadratic regression.
  Eigen::MatrixXd design(m, np);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto k = static_cast<std::size_t>(i);
    design(i, 0) = -field[k];
    design(i, 1) = -0.5 * field[k] * field[k];
    if (options.fit_offset) design(i, 2) = 1.0;
    design.row(i) *= weight[i];
    rhs[i] = shift[k] * weight[i];
  }
  const Eigen::VectorXd p0 = design.colPivHouseholderQr().solve(rhs);

  const auto residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    StarkModel model = geometry;
    model.delta_mu = p[0];
    model.delta_alpha = p[1];
    const double offset = options.fit_offset ? p[2] : 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto k = static_cast<std::size_t>(i);
      r[i] = weight[i] * (offset + stark_shift_ghz(field[k], model) - shift[k]);
    }
  };
  const LeastSquaresResult ls = solve_least_squares(residual, p0, m, options.solver);

  FitResult fit;
  fit.names = {"delta_mu", "delta_alpha"};
  if (options.fit_offset) fit.names.emplace_back("offset");
  fit.values.assign(ls.params.data(), ls.params.data() + ls.params.size());
  fit.std_errors.assign(ls.std_errors.data(), ls.std_errors.data() + ls.std_errors.size());
  Eigen::VectorXd raw = ls.residuals.cwiseQuotient(weight);
  fit.r_squared = r_squared(raw, shift);
  fit.residual_norm = raw.norm();
  fit.iterations = ls.iterations;
  fit.degenerate = ls.rank_deficient;
  fit.converged = ls.converged && !ls.rank_deficient;
  fit.message = ls.stop_reason;
  return fit;
}

double convert_dipole_to_debye(double delta_mu_ghz_per_mv_m) { return delta_mu_ghz_per_mv_m / kDebyeMvPerMToGHz; }
double convert_debye_to_dipole(double debye) { return debye * kDebyeMvPerMToGHz; }

double convert_polarizability_to_a3(double delta_alpha_ghz_per_mv_m2) { return delta_alpha_ghz_per_mv_m2 / kA3ToGHz; }
double convert_a3_to_polarizability(double a3) { return a3 * kA3ToGHz; }

}  // namespace colorcenter
