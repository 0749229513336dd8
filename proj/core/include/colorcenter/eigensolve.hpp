#pragma once

#include <Eigen/Core>

#include "colorcenter/defect_model.hpp"

namespace colorcenter {

/// Ascending eigenvalues (GHz) and orthonormal eigenvectors stored as columns.
struct EigenSystem {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
};

/// Absolute tolerance (GHz) below which two eigenvalues count as degenerate.
inline constexpr double kDegeneracyToleranceGHz = 1e-6;

EigenSystem eigensolve(const HermitianMatrix& h);

/// Validates Hermiticity first; throws InputError for non-Hermitian input.
EigenSystem eigensolve(const ComplexMatrix& h);

/// Number of distinct eigenvalues under kDegeneracyToleranceGHz.
int count_distinct(const Eigen::VectorXd& sorted_values, double tolerance = kDegeneracyToleranceGHz);

}  // namespace colorcenter
