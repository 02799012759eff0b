#pragma once

#include "fracinv/forward_solver.hpp"

namespace fracinv {

/// Data of the Kohn-Vogelius reconstruction: Neumann excitation and the
/// measured Dirichlet trace on the lateral boundary.
struct CauchyData
{
  BoundaryData flux;      // Neumann data φ
  BoundaryData observed;  // Dirichlet trace measurement
};

struct ObjectiveEvaluation
{
  double k_value = 0.0;      // K(q)
  double k_rho_value = 0.0;  // K(q) + ρ‖q‖²
  /// Nodal L2 gradient of K_ρ; empty for value-only evaluations.
  Eigen::VectorXd gradient;
  Field u_n;
  Field u_d;
};

/// ∫_0^T (∇v·∇v + q v²) dx dt: trapezoid in time, stiffness + M_q in space.
double kv_energy(const Field& v, const Eigen::VectorXd& q, const SpaceMesh& mesh,
                 const TimeGrid& grid);

ObjectiveEvaluation eval_kv(const Potential& q, const CauchyData& data, double rho,
                            const SpaceMesh& mesh, const TimeGrid& grid);
ObjectiveEvaluation grad_kv(const Potential& q, const CauchyData& data, double rho,
                            const SpaceMesh& mesh, const TimeGrid& grid);

struct LeastSquaresEvaluation
{
  double misfit = 0.0;  // ∫∫_∂Ω |u - φ|²
  double value = 0.0;   // misfit + μ‖q‖²
  Eigen::VectorXd gradient;
  Field u;
};

LeastSquaresEvaluation eval_ls(const Potential& q, const CauchyData& data, double mu,
                               const SpaceMesh& mesh, const TimeGrid& grid);
LeastSquaresEvaluation grad_ls(const Potential& q, const CauchyData& data, double mu,
                               const SpaceMesh& mesh, const TimeGrid& grid);

/// Trapezoid-in-time accumulation of ∫ φ_k a(t) b(t) dx dt for every node k.
Eigen::VectorXd time_integrated_product(const Field& a, const Field& b, const SpaceMesh& mesh,
                                        const TimeGrid& grid);

} // namespace fracinv
