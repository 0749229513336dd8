#include "colorcenter/hamiltonian_fit.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "colorcenter/eigensolve.hpp"
#include "colorcenter/errors.hpp"
#include "colorcenter/spectrum_simulator.hpp"

namespace colorcenter {

std::vector<double> distinct_line_frequencies(const DefectParameters& params, const FieldConfig& field) {
  std::vector<double> f;
  for (const auto& line : transition_lines(params, field, IntensityModel::uniform)) f.push_back(line.freq_offset_ghz);
  std::sort(f.begin(), f.end());
  std::vector<double> out;
  for (double v : f) {
    if (out.empty() || v - out.back() > kDegeneracyToleranceGHz) out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> assign_peaks(std::span<const double> measured, std::span<const double> distinct,
                                      bool& ambiguous) {
  ambiguous = false;
  std::vector<std::size_t> idx;
  idx.reserve(measured.size());
  for (double m : measured) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < distinct.size(); ++k) {
      if (std::abs(distinct[k] - m) < std::abs(distinct[best] - m)) best = k;
    }
    if (std::find(idx.begin(), idx.end(), best) != idx.end()) ambiguous = true;
    idx.push_back(best);
  }
  return idx;
}

FitResult fit_hamiltonian_params(std::span<const PeakObservation> peaks, const HamiltonianFitOptions& options) {
  options.initial.validate();
  if (!options.fit_lambda && !options.fit_xi) throw InputError("nothing to fit: lambda and xi are both fixed");
  const Eigen::Index np = (options.fit_lambda ? 1 : 0) + (options.fit_xi ? 1 : 0);
  if (static_cast<Eigen::Index>(peaks.size()) < np) throw InputError("fewer peaks than free Hamiltonian parameters");
  if (options.field_dir.norm() == 0.0 || options.axis.norm() == 0.0) {
    throw InputError("field direction and defect axis must be nonzero");
  }
  for (const auto& p : peaks) {
    if (!std::isfinite(p.b_tesla) || !std::isfinite(p.freq_offset_ghz) || p.b_tesla < 0.0) {
      throw InputError("peak observations need finite values and |B| >= 0");
    }
  }

  // Group peaks by field value, keeping the caller's order inside each group.
  std::map<double, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < peaks.size(); ++i) groups[peaks[i].b_tesla].push_back(i);
  const Vec3 dir = options.field_dir.normalized();

  const double xi0 = options.initial.xi_ghz();
  const double xi_angle = xi0 > 0.0 ? std::atan2(options.initial.xi_y_ghz, options.initial.xi_x_ghz) : 0.0;

  const auto params_from = [&](const Eigen::VectorXd& p) {
    DefectParameters d = options.initial;
    Eigen::Index k = 0;
    if (options.fit_lambda) d.lambda_soc_ghz = p[k++];
    if (options.fit_xi) {
      const double xi = p[k++];
      d.xi_x_ghz = xi * std::cos(xi_angle);
      d.xi_y_ghz = xi * std::sin(xi_angle);
    }
    return d;
  };

  const auto evaluate = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, bool& ambiguous) {
    ambiguous = false;
    const DefectParameters d = params_from(p);
    for (const auto& [b, members] : groups) {
      const auto distinct = distinct_line_frequencies(d, FieldConfig(b * dir, options.axis));
      std::vector<double> measured;
      for (std::size_t i : members) measured.push_back(peaks[i].freq_offset_ghz);
      bool amb = false;
      const auto idx = assign_peaks(measured, distinct, amb);
      ambiguous = ambiguous || amb;
      for (std::size_t j = 0; j < members.size(); ++j) {
        r[static_cast<Eigen::Index>(members[j])] = distinct[idx[j]] - measured[j];
      }
    }
  };

  Eigen::VectorXd p0(np);
  {
    Eigen::Index k = 0;
    if (options.fit_lambda) p0[k++] = options.initial.lambda_soc_ghz;
    if (options.fit_xi) p0[k++] = xi0;
  }
  const auto m = static_cast<Eigen::Index>(peaks.size());
  const ResidualFunction residual = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    bool ignored = false;
    evaluate(p, r, ignored);
  };

  LeastSquaresOptions opts = options.solver;
  if (opts.parameter_scale.empty()) {
    // Finite-difference floor of ~1e-4 GHz keeps steps above eigensolver round-off.
    opts.parameter_scale.assign(static_cast<std::size_t>(np), 1e3);
  }
  const LeastSquaresResult ls = solve_least_squares(residual, p0, m, opts);

  Eigen::VectorXd r_final(m);
  bool ambiguous = false;
  evaluate(ls.params, r_final, ambiguous);
  if (ambiguous) throw InputError("peak assignment is ambiguous: two measured peaks map to one simulated line");

  FitResult fit;
  Eigen::Index k = 0;
  if (options.fit_lambda) {
    fit.names.emplace_back("lambda_soc");
    fit.values.push_back(ls.params[k]);
    fit.std_errors.push_back(ls.std_errors[k]);
    ++k;
  }
  if (options.fit_xi) {
    fit.names.emplace_back("xi");
    fit.values.push_back(std::abs(ls.params[k]));
    fit.std_errors.push_back(ls.std_errors[k]);
  }
  std::vector<double> observed;
  for (const auto& p : peaks) observed.push_back(p.freq_offset_ghz);
  fit.r_squared = r_squared(ls.residuals, observed);
  fit.residual_norm = ls.residuals.norm();
  fit.iterations = ls.iterations;
  fit.degenerate = ls.rank_deficient;
  fit.converged = ls.converged && !ls.rank_deficient;
  fit.message = ls.rank_deficient ? "degenerate: data constrain only a combination of the free parameters"
                                  : ls.stop_reason;
  return fit;
}

}  // namespace colorcenter
