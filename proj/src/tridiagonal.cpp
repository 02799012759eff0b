#include "fracinv/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

namespace fracinv {

TridiagonalSolver::TridiagonalSolver(const Eigen::SparseMatrix<double>& matrix)
{
  const Eigen::Index n = matrix.rows();
  if (n == 0 || matrix.cols() != n)
    throw std::invalid_argument("tridiagonal solver needs a non-empty square matrix");

  Eigen::VectorXd d(n);
  off_ = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 1, 0));
  d.setZero();
  for (int k = 0; k < matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, k); it; ++it) {
      const auto i = it.row(), j = it.col();
      if (i == j)
        d(i) = it.value();
      else if (i == j + 1)
        off_(j) = it.value();
      else if (std::abs(i - j) > 1 && it.value() != 0.0)
        throw std::invalid_argument("matrix is not tridiagonal");
    }

  diag_ = d;
  factor_ = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 1; i < n; ++i) {
    if (diag_(i - 1) <= 0.0)
      throw std::runtime_error("tridiagonal elimination hit a non-positive pivot");
    factor_(i) = off_(i - 1) / diag_(i - 1);
    diag_(i) -= factor_(i) * off_(i - 1);
  }
  if (diag_(n - 1) <= 0.0)
    throw std::runtime_error("tridiagonal elimination hit a non-positive pivot");
}

Eigen::VectorXd TridiagonalSolver::solve(const Eigen::VectorXd& rhs) const
{
  const Eigen::Index n = diag_.size();
  Eigen::VectorXd x = rhs;
  for (Eigen::Index i = 1; i < n; ++i)
    x(i) -= factor_(i) * x(i - 1);
  x(n - 1) /= diag_(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i)
    x(i) = (x(i) - off_(i) * x(i + 1)) / diag_(i);
  return x;
}

} // namespace fracinv
