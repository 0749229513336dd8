#include "colorcenter/eigensolve.hpp"

#include <Eigen/Eigenvalues>

#include "colorcenter/errors.hpp"

namespace colorcenter {

EigenSystem eigensolve(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  // Eigen returns eigenvalues in ascending order.
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenSystem eigensolve(const ComplexMatrix& h) { return eigensolve(HermitianMatrix(h)); }

int count_distinct(const Eigen::VectorXd& sorted_values, double tolerance) {
  if (sorted_values.size() == 0) return 0;
  int n = 1;
  for (Eigen::Index i = 1; i < sorted_values.size(); ++i) {
    if (sorted_values[i] - sorted_values[i - 1] > tolerance) ++n;
  }
  return n;
}

}  // namespace colorcenter
