#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fracinv/time_grid.hpp"
#include "fracinv/tridiagonal.hpp"

namespace fracinv {

using SparseMatrix = Eigen::SparseMatrix<double>;

/**
 * Spatial discretization of the domain.
 *
 * dim == 1: P1 elements on [a, b] with consistent mass.
 * dim == 2: P1 elements on a structured right-triangle grid of [0,1]^2, whose
 * stiffness reduces to the 5-point stencil; the mass is lumped.
 *
 * Node numbering in 2D is i + j*(n_x + 1) with x = i*hx, y = j*hy.
 */
class SpaceMesh
{
public:
  int dim() const { return dim_; }
  Eigen::Index n_nodes() const { return coords_.rows(); }
  int n_cells_x() const { return n_x_; }
  int n_cells_y() const { return n_y_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }

  /// n_nodes x dim
  const Eigen::MatrixXd& coords() const { return coords_; }
  double x(Eigen::Index i) const { return coords_(i, 0); }
  double y(Eigen::Index i) const { return dim_ == 2 ? coords_(i, 1) : 0.0; }

  const std::vector<int>& boundary_idx() const { return boundary_; }
  const std::vector<int>& interior_idx() const { return interior_; }
  Eigen::Index n_boundary() const { return static_cast<Eigen::Index>(boundary_.size()); }
  /// Position of node i in boundary_idx(), or -1.
  int boundary_slot(Eigen::Index i) const { return boundary_slot_[i]; }
  /// Boundary quadrature weight per boundary slot (1 per endpoint in 1D).
  const Eigen::VectorXd& boundary_weights() const { return boundary_weights_; }

  const SparseMatrix& stiffness() const { return stiffness_; }
  const SparseMatrix& mass() const { return mass_; }
  bool lumped_mass() const { return dim_ == 2; }

  /// Mass matrix weighted by the nodal coefficient q: entries of ∫ q φ_i φ_j.
  SparseMatrix coefficient_mass(const Eigen::VectorXd& q) const;

  /// d/dq_k of a^T M_q b, i.e. ∫ φ_k a b for every node k.
  Eigen::VectorXd coefficient_mass_derivative(const Eigen::VectorXd& a,
                                              const Eigen::VectorXd& b) const;

  double mass_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double l2_norm(const Eigen::VectorXd& a) const;

  /// L2 Riesz representative of an assembled dual vector: M^{-1} v.
  Eigen::VectorXd riesz(const Eigen::VectorXd& dual) const;

  /// Restrict a nodal vector to the boundary slots.
  Eigen::VectorXd trace(const Eigen::VectorXd& nodal) const;
  /// Scatter boundary-slot values weighted by the boundary quadrature into a
  /// nodal load vector (∫_∂Ω g v ds).
  Eigen::VectorXd boundary_load(const Eigen::VectorXd& boundary_values) const;

  double measure() const { return measure_; }

  friend SpaceMesh build_interval_mesh(double a, double b, int n_cells);
  friend SpaceMesh build_square_mesh(int n_x, int n_y);

private:
  void finish_boundary(const std::vector<bool>& on_boundary);

  int dim_ = 1;
  int n_x_ = 0;
  int n_y_ = 0;
  double hx_ = 0.0;
  double hy_ = 0.0;
  double measure_ = 0.0;
  Eigen::MatrixXd coords_;
  std::vector<int> boundary_;
  std::vector<int> interior_;
  std::vector<int> boundary_slot_;
  Eigen::VectorXd boundary_weights_;
  SparseMatrix stiffness_;
  SparseMatrix mass_;
  TridiagonalSolver mass_solver_;  // 1D only
};

SpaceMesh build_interval_mesh(double a, double b, int n_cells);
SpaceMesh build_square_mesh(int n_x, int n_y);

/// Nodal potential with box bounds [lower, upper].
struct Potential
{
  Eigen::VectorXd values;
  double lower = 1e-3;
  double upper = 10.0;

  /// Clamp nodewise into [lower, upper]; returns true if any node moved.
  bool project();
  bool within_bounds() const;
};

enum class BoundaryKind { Neumann, Dirichlet };

/// Values over (boundary slot, time node): Neumann flux or Dirichlet trace.
struct BoundaryData
{
  Eigen::MatrixXd values;
  BoundaryKind kind = BoundaryKind::Neumann;

  static BoundaryData zeros(const SpaceMesh& mesh, const TimeGrid& grid, BoundaryKind kind);
};

/// Boundary trace of a field at every time node.
BoundaryData trace_of(const Field& field, const SpaceMesh& mesh);

/// Trapezoid in time, boundary quadrature in space: ∫_0^T ∫_∂Ω f g ds dt.
double boundary_l2_inner(const BoundaryData& f, const BoundaryData& g,
                         const SpaceMesh& mesh, const TimeGrid& grid);

/// Trapezoid in time, mass matrix in space: ∫_0^T ∫_Ω f g dx dt.
double space_time_inner(const Field& f, const Field& g, const SpaceMesh& mesh,
                        const TimeGrid& grid);

} // namespace fracinv
