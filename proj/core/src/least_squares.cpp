#include "colorcenter/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "colorcenter/errors.hpp"

namespace colorcenter {

std::size_t FitResult::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw std::out_of_range("no fit parameter named '" + std::string(name) + "'");
}

double FitResult::value(std::string_view name) const { return values[index_of(name)]; }
double FitResult::std_error(std::string_view name) const { return std_errors[index_of(name)]; }

namespace {

double scale_for(const LeastSquaresOptions& options, Eigen::Index j) {
  if (options.parameter_scale.empty()) return 1.0;
  return options.parameter_scale.at(static_cast<std::size_t>(j));
}

double gradient_cosine(const Eigen::MatrixXd& jac, const Eigen::VectorXd& r) {
  const double rn = r.norm();
  if (rn == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < jac.cols(); ++j) {
    const double cn = jac.col(j).norm();
    if (cn == 0.0) continue;
    worst = std::max(worst, std::abs(jac.col(j).dot(r)) / (cn * rn));
  }
  return worst;
}

void fill_covariance(LeastSquaresResult& res, const LeastSquaresOptions& options) {
  const Eigen::MatrixXd& jac = res.jacobian;
  const Eigen::Index m = jac.rows();
  const Eigen::Index n = jac.cols();
  Eigen::VectorXd col_norm(n);
  bool zero_column = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    col_norm[j] = jac.col(j).norm();
    if (col_norm[j] == 0.0) {
      zero_column = true;
      col_norm[j] = 1.0;
    }
  }
  const Eigen::MatrixXd scaled = jac * col_norm.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::MatrixXd& v = svd.matrixV();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;

  const double dof = static_cast<double>(std::max<Eigen::Index>(1, m - n));
  const double s2 = 2.0 * res.cost / dof;

  Eigen::MatrixXd cov_scaled = Eigen::MatrixXd::Zero(n, n);
  std::vector<bool> unconstrained(static_cast<std::size_t>(n), false);
  bool deficient = zero_column;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = k < sv.size() ? sv[k] : 0.0;
    if (smax > 0.0 && s > options.rank_tolerance * smax) {
      cov_scaled += v.col(k) * v.col(k).transpose() / (s * s);
    } else {
      deficient = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(v(j, k)) > 1e-6) unconstrained[static_cast<std::size_t>(j)] = true;
      }
    }
  }
  res.rank_deficient = deficient;
  res.covariance = s2 * col_norm.cwiseInverse().asDiagonal() * cov_scaled * col_norm.cwiseInverse().asDiagonal();
  res.std_errors.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (unconstrained[static_cast<std::size_t>(j)] || jac.col(j).norm() == 0.0) {
      res.std_errors[j] = std::numeric_limits<double>::infinity();
    } else {
      res.std_errors[j] = std::sqrt(std::max(0.0, res.covariance(j, j)));
    }
  }
}

}  // namespace

Eigen::MatrixXd numeric_jacobian(const ResidualFunction& f, const Eigen::VectorXd& x, Eigen::Index n_residuals,
                                 const LeastSquaresOptions& options) {
  Eigen::MatrixXd jac(n_residuals, x.size());
  Eigen::VectorXd plus(n_residuals);
  Eigen::VectorXd minus(n_residuals);
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = options.jacobian_step * std::max(std::abs(x[j]), scale_for(options, j));
    xp[j] = x[j] + h;
    f(xp, plus);
    xp[j] = x[j] - h;
    f(xp, minus);
    xp[j] = x[j];
    jac.col(j) = (plus - minus) / (2.0 * h);
  }
  return jac;
}

LeastSquaresResult solve_least_squares(const ResidualFunction& f, const Eigen::VectorXd& x0,
                                       Eigen::Index n_residuals, const LeastSquaresOptions& options) {
  const Eigen::Index n = x0.size();
  if (n == 0) throw InputError("least squares needs at least one parameter");
  if (n_residuals < n) throw InputError("fewer observations than free parameters");

  LeastSquaresResult res;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd r(n_residuals);
  f(x, r);
  if (!r.allFinite()) throw NumericalError("model is not finite at the initial guess");
  double cost = 0.5 * r.squaredNorm();

  Eigen::MatrixXd jac = numeric_jacobian(f, x, n_residuals, options);
  Eigen::VectorXd diag = (jac.transpose() * jac).diagonal();
  double mu = 1e-3 * std::max(diag.maxCoeff(), 1e-300);
  double nu = 2.0;

  Eigen::VectorXd r_new(n_residuals);
  int iter = 0;
  bool done = false;
  for (; iter < options.max_iterations && !done; ++iter) {
    const Eigen::VectorXd g = jac.transpose() * r;
    if (cost == 0.0 || gradient_cosine(jac, r) <= options.gradient_tolerance) {
      res.converged = true;
      res.stop_reason = "gradient";
      break;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    diag = diag.cwiseMax(jtj.diagonal());
    const double floor = std::max(diag.maxCoeff() * 1e-12, 1e-300);
    const Eigen::VectorXd damping = diag.cwiseMax(floor);

    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal() += mu * damping;
      const Eigen::VectorXd step = lhs.ldlt().solve(-g);
      if (!step.allFinite()) {
        mu *= nu;
        nu *= 2.0;
        continue;
      }
      const Eigen::VectorXd x_new = x + step;
      f(x_new, r_new);
      const double cost_new = r_new.allFinite() ? 0.5 * r_new.squaredNorm() : std::numeric_limits<double>::infinity();
      if (cost_new < cost) {
        const double predicted = 0.5 * step.dot(mu * damping.cwiseProduct(step) - g);
        const double rho = predicted > 0.0 ? (cost - cost_new) / predicted : 1.0;
        mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
        nu = 2.0;

        const Eigen::VectorXd d_sqrt = damping.cwiseSqrt();
        const double step_norm = d_sqrt.cwiseProduct(step).norm();
        const double x_norm = d_sqrt.cwiseProduct(x_new).norm();
        const double rel_drop = (cost - cost_new) / cost;

        x = x_new;
        r = r_new;
        cost = cost_new;
        accepted = true;

        if (step_norm <= options.step_tolerance * (x_norm + options.step_tolerance)) {
          res.converged = true;
          res.stop_reason = "step";
          done = true;
        } else if (rel_drop <= options.cost_tolerance) {
          res.converged = true;
          res.stop_reason = "cost";
          done = true;
        }
        break;
      }
      mu *= nu;
      nu *= 2.0;
    }
    if (!accepted) {
      // No descent even under heavy damping: numerically at a minimum.
      res.converged = true;
      res.stop_reason = "stalled";
      break;
    }
    jac = numeric_jacobian(f, x, n_residuals, options);
  }
  if (!res.converged) res.stop_reason = "max_iterations";

  res.params = x;
  res.residuals = r;
  res.cost = cost;
  res.jacobian = jac;
  res.iterations = iter;
  res.gradient_cosine = gradient_cosine(jac, r);
  fill_covariance(res, options);
  return res;
}

double r_squared(const Eigen::VectorXd& residuals, std::span<const double> y) {
  if (y.empty()) return 0.0;
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_tot = 0.0;
  for (double v : y) ss_tot += (v - mean) * (v - mean);
  const double ss_res = residuals.squaredNorm();
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace colorcenter
