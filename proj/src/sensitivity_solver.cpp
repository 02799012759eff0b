#include "fracinv/sensitivity_solver.hpp"

namespace fracinv {

namespace {

Eigen::MatrixXd perturbation_loads(const ForwardSolver& solver, const Eigen::VectorXd& delta_q,
                                   const Field& state)
{
  return -(solver.mesh().coefficient_mass(delta_q) * state.values());
}

} // namespace

Field solve_sensitivity_neumann(const ForwardSolver& solver, const Eigen::VectorXd& delta_q,
                                const Field& u_n)
{
  return solver.march(perturbation_loads(solver, delta_q, u_n), BoundaryKind::Neumann);
}

Field solve_sensitivity_dirichlet(const ForwardSolver& solver, const Eigen::VectorXd& delta_q,
                                  const Field& u_d)
{
  return solver.march(perturbation_loads(solver, delta_q, u_d), BoundaryKind::Dirichlet);
}

Field solve_sensitivity_neumann(const Potential& q, const Eigen::VectorXd& delta_q,
                                const Field& u_n, const SpaceMesh& mesh, const TimeGrid& grid)
{
  return solve_sensitivity_neumann(ForwardSolver(q.values, mesh, grid), delta_q, u_n);
}

Field solve_sensitivity_dirichlet(const Potential& q, const Eigen::VectorXd& delta_q,
                                  const Field& u_d, const SpaceMesh& mesh, const TimeGrid& grid)
{
  return solve_sensitivity_dirichlet(ForwardSolver(q.values, mesh, grid), delta_q, u_d);
}

} // namespace fracinv
