#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fracinv {

/// Symmetric tridiagonal matrix stored by bands, factored once and solved many
/// times (Thomas algorithm without pivoting; caller guarantees SPD).
class TridiagonalSolver
{
public:
  TridiagonalSolver() = default;
  explicit TridiagonalSolver(const Eigen::SparseMatrix<double>& matrix);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::Index size() const { return diag_.size(); }

private:
  Eigen::VectorXd off_;     // sub/super diagonal, size n-1
  Eigen::VectorXd diag_;    // pivots after elimination
  Eigen::VectorXd factor_;  // elimination multipliers
};

} // namespace fracinv
