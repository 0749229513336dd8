#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace colorcenter {

/// Outcome of any curve fit. `values` and `std_errors` are parallel to `names`.
/// A std_error of +inf marks a parameter the data cannot constrain.
struct FitResult {
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<double> std_errors;
  double r_squared = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
  bool degenerate = false;
  int iterations = 0;
  std::string message;

  /// Throws std::out_of_range for unknown names.
  [[nodiscard]] double value(std::string_view name) const;
  [[nodiscard]] double std_error(std::string_view name) const;
  [[nodiscard]] std::size_t index_of(std::string_view name) const;
};

/// Writes residuals (model - data, optionally weighted) for a parameter vector.
using ResidualFunction = std::function<void(const Eigen::VectorXd& params, Eigen::VectorXd& residuals)>;

struct LeastSquaresOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-10;      // relative parameter step
  double cost_tolerance = 1e-14;      // relative cost reduction
  double gradient_tolerance = 1e-10;  // max |cos| between residual and Jacobian columns
  double jacobian_step = 1e-7;        // relative central-difference step
  /// Typical magnitude per parameter; sets the finite-difference floor. Empty means 1.
  std::vector<double> parameter_scale;
  /// Relative singular-value cutoff below which the scaled Jacobian counts as rank deficient.
  double rank_tolerance = 1e-7;
};

struct LeastSquaresResult {
  Eigen::VectorXd params;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd jacobian;
  Eigen::MatrixXd covariance;  // scaled by the reduced chi-square
  Eigen::VectorXd std_errors;
  double cost = 0.0;            // 0.5 * |r|^2
  double gradient_cosine = 0.0; // max_j |J_j . r| / (|J_j| |r|)
  int iterations = 0;
  bool converged = false;       // a tolerance was met before the iteration limit
  bool rank_deficient = false;
  std::string stop_reason;
};

/// Central-difference Jacobian of `f` at `x`.
Eigen::MatrixXd numeric_jacobian(const ResidualFunction& f, const Eigen::VectorXd& x, Eigen::Index n_residuals,
                                 const LeastSquaresOptions& options);

/// Damped Gauss-Newton (Levenberg-Marquardt) minimization of 0.5 * |f(x)|^2
/// with Marquardt diagonal scaling and numeric Jacobians.
LeastSquaresResult solve_least_squares(const ResidualFunction& f, const Eigen::VectorXd& x0,
                                       Eigen::Index n_residuals, const LeastSquaresOptions& options = {});

/// 1 - SS_res / SS_tot for observations `y` (1 when y is constant and the fit is exact).
double r_squared(const Eigen::VectorXd& residuals, std::span<const double> y);

}  // namespace colorcenter
