#pragma once

#include "fracinv/forward_solver.hpp"

namespace fracinv {

/// Per-step loads (K + M_q) v^n, the discrete image of η ↦ ∫∇v·∇η + q v η.
Eigen::MatrixXd energy_loads(const ForwardSolver& solver, const Field& v);

/// Dirichlet-zero backward solve with load +2 (K + M_q)(u_N - u_D).
Field solve_xi_d(const ForwardSolver& solver, const Field& u_n, const Field& u_d);
/// Neumann-zero backward solve with load -2 (K + M_q)(u_N - u_D).
Field solve_xi_n(const ForwardSolver& solver, const Field& u_n, const Field& u_d);
/// Backward solve with Neumann flux -2 (trace(u) - observed) and no source.
Field solve_zeta_ls(const ForwardSolver& solver, const Field& u, const BoundaryData& observed);

Field solve_xi_d(const Potential& q, const Field& u_n, const Field& u_d, const SpaceMesh& mesh,
                 const TimeGrid& grid);
Field solve_xi_n(const Potential& q, const Field& u_n, const Field& u_d, const SpaceMesh& mesh,
                 const TimeGrid& grid);
Field solve_zeta_ls(const Potential& q, const Field& u, const BoundaryData& observed,
                    const SpaceMesh& mesh, const TimeGrid& grid);

} // namespace fracinv
