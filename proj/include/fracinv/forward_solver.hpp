#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "fracinv/mesh.hpp"
#include "fracinv/time_grid.hpp"

namespace fracinv {

/// Raised when an iterative per-step solve fails to reach its tolerance.
class SolverError : public std::runtime_error
{
public:
  SolverError(const std::string& what, double residual)
    : std::runtime_error(what), residual_(residual)
  {}
  double residual() const { return residual_; }

private:
  double residual_;
};

/**
 * Per-step operator (l1_scale*b_0) M + K + M_q for a fixed potential and
 * boundary kind. For Dirichlet problems the boundary rows are eliminated and
 * the prescribed values moved to the right-hand side.
 */
class StepOperator
{
public:
  StepOperator(const Eigen::VectorXd& q, BoundaryKind kind, const SpaceMesh& mesh,
               const TimeGrid& grid);
  ~StepOperator();
  StepOperator(StepOperator&&) noexcept;
  StepOperator& operator=(StepOperator&&) noexcept;

  BoundaryKind kind() const { return kind_; }

  /// Solves for u^n given the full nodal right-hand side. Dirichlet values are
  /// taken from boundary_values (one per boundary slot). guess seeds the 2D
  /// iterative solver.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs, const Eigen::VectorXd* boundary_values,
                        const Eigen::VectorXd& guess) const;

private:
  struct Impl;
  BoundaryKind kind_;
  std::unique_ptr<Impl> impl_;
};

/**
 * L1 time stepper for ∂_t^α u - Δu + q u = f with zero initial state.
 * Builds the Neumann and Dirichlet step operators on first use and reuses
 * them for every subsequent solve with the same potential.
 */
class ForwardSolver
{
public:
  ForwardSolver(const Eigen::VectorXd& q, const SpaceMesh& mesh, const TimeGrid& grid);

  const SpaceMesh& mesh() const { return *mesh_; }
  const TimeGrid& grid() const { return *grid_; }
  const Eigen::VectorXd& potential() const { return q_; }

  /// Marches assembled per-step loads (n_nodes x n_time; column 0 unused).
  /// For Dirichlet problems boundary_values (n_boundary x n_time) are imposed
  /// strongly; nullptr means homogeneous.
  Field march(const Eigen::MatrixXd& loads, BoundaryKind kind,
              const Eigen::MatrixXd* boundary_values = nullptr) const;

  Field neumann(const BoundaryData& flux, const Field* source = nullptr) const;
  Field dirichlet(const BoundaryData& trace, const Field* source = nullptr) const;

  /// Solution of the backward (right Riemann-Liouville) problem with
  /// homogeneous boundary data of the given kind and zero terminal state,
  /// driven by assembled per-step loads. Exact transpose of march() with
  /// respect to the trapezoid-in-time inner product.
  Field backward(const Eigen::MatrixXd& loads, BoundaryKind kind) const;

  /// Assembled load M f^n at every time node.
  Eigen::MatrixXd source_loads(const Field& source) const;

private:
  const StepOperator& op(BoundaryKind kind) const;

  Eigen::VectorXd q_;
  const SpaceMesh* mesh_;
  const TimeGrid* grid_;
  mutable std::optional<StepOperator> neumann_op_;
  mutable std::optional<StepOperator> dirichlet_op_;
};

Field solve_neumann(const Potential& q, const BoundaryData& flux, const Field* source,
                    const SpaceMesh& mesh, const TimeGrid& grid);
Field solve_dirichlet(const Potential& q, const BoundaryData& trace, const Field* source,
                      const SpaceMesh& mesh, const TimeGrid& grid);
Field solve_backward(const Potential& q, const Eigen::MatrixXd& loads, BoundaryKind kind,
                     const SpaceMesh& mesh, const TimeGrid& grid);

} // namespace fracinv
