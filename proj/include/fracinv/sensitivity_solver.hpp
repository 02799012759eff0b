#pragma once

#include "fracinv/forward_solver.hpp"

namespace fracinv {

// Directional derivatives of q ↦ u_N[q] and q ↦ u_D[q] along delta_q, with the
// state frozen at the current q. Both are linear in delta_q.

Field solve_sensitivity_neumann(const ForwardSolver& solver, const Eigen::VectorXd& delta_q,
                                const Field& u_n);
Field solve_sensitivity_dirichlet(const ForwardSolver& solver, const Eigen::VectorXd& delta_q,
                                  const Field& u_d);

Field solve_sensitivity_neumann(const Potential& q, const Eigen::VectorXd& delta_q,
                                const Field& u_n, const SpaceMesh& mesh, const TimeGrid& grid);
Field solve_sensitivity_dirichlet(const Potential& q, const Eigen::VectorXd& delta_q,
                                  const Field& u_d, const SpaceMesh& mesh, const TimeGrid& grid);

} // namespace fracinv
