#include "fracinv/adjoint_solver.hpp"

namespace fracinv {

Eigen::MatrixXd energy_loads(const ForwardSolver& solver, const Field& v)
{
  const SpaceMesh& mesh = solver.mesh();
  const SparseMatrix energy = mesh.stiffness() + mesh.coefficient_mass(solver.potential());
  return energy * v.values();
}

Field solve_xi_d(const ForwardSolver& solver, const Field& u_n, const Field& u_d)
{
  return solver.backward(2.0 * energy_loads(solver, u_n - u_d), BoundaryKind::Dirichlet);
}

Field solve_xi_n(const ForwardSolver& solver, const Field& u_n, const Field& u_d)
{
  return solver.backward(-2.0 * energy_loads(solver, u_n - u_d), BoundaryKind::Neumann);
}

Field solve_zeta_ls(const ForwardSolver& solver, const Field& u, const BoundaryData& observed)
{
  const SpaceMesh& mesh = solver.mesh();
  const BoundaryData traced = trace_of(u, mesh);
  if (observed.values.rows() != traced.values.rows() ||
      observed.values.cols() != traced.values.cols())
    throw std::invalid_argument("observation shape mismatch");
  Eigen::MatrixXd loads = Eigen::MatrixXd::Zero(mesh.n_nodes(), u.n_time());
  for (Eigen::Index n = 0; n < u.n_time(); ++n)
    loads.col(n) = mesh.boundary_load(-2.0 * (traced.values.col(n) - observed.values.col(n)));
  return solver.backward(loads, BoundaryKind::Neumann);
}

Field solve_xi_d(const Potential& q, const Field& u_n, const Field& u_d, const SpaceMesh& mesh,
                 const TimeGrid& grid)
{
  return solve_xi_d(ForwardSolver(q.values, mesh, grid), u_n, u_d);
}

Field solve_xi_n(const Potential& q, const Field& u_n, const Field& u_d, const SpaceMesh& mesh,
                 const TimeGrid& grid)
{
  return solve_xi_n(ForwardSolver(q.values, mesh, grid), u_n, u_d);
}

Field solve_zeta_ls(const Potential& q, const Field& u, const BoundaryData& observed,
                    const SpaceMesh& mesh, const TimeGrid& grid)
{
  return solve_zeta_ls(ForwardSolver(q.values, mesh, grid), u, observed);
}

} // namespace fracinv
