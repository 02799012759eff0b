#include "fracinv/objective.hpp"

#include "fracinv/adjoint_solver.hpp"

namespace fracinv {

namespace {

void check_data(const CauchyData& data, const SpaceMesh& mesh, const TimeGrid& grid)
{
  for (const auto* bd : {&data.flux, &data.observed})
    if (bd->values.rows() != mesh.n_boundary() || bd->values.cols() != grid.n_nodes())
      throw std::invalid_argument("boundary data shape does not match mesh/grid");
}

void check_regularization(double weight)
{
  if (!(weight >= 0.0))
    throw std::invalid_argument("regularization weight must be non-negative");
}

} // namespace

double kv_energy(const Field& v, const Eigen::VectorXd& q, const SpaceMesh& mesh,
                 const TimeGrid& grid)
{
  const SparseMatrix energy = mesh.stiffness() + mesh.coefficient_mass(q);
  double sum = 0.0;
  for (int n = 0; n <= grid.n_steps; ++n)
    sum += grid.trapezoid_weight(n) * v.at_step(n).dot(energy * v.at_step(n));
  return sum;
}

Eigen::VectorXd time_integrated_product(const Field& a, const Field& b, const SpaceMesh& mesh,
                                        const TimeGrid& grid)
{
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.n_nodes());
  for (int n = 0; n <= grid.n_steps; ++n)
    out += grid.trapezoid_weight(n) * mesh.coefficient_mass_derivative(a.at_step(n), b.at_step(n));
  return out;
}

ObjectiveEvaluation eval_kv(const Potential& q, const CauchyData& data, double rho,
                            const SpaceMesh& mesh, const TimeGrid& grid)
{
  check_regularization(rho);
  check_data(data, mesh, grid);
  const ForwardSolver solver(q.values, mesh, grid);
  ObjectiveEvaluation out;
  out.u_n = solver.neumann(data.flux);
  out.u_d = solver.dirichlet(data.observed);
  out.k_value = kv_energy(out.u_n - out.u_d, q.values, mesh, grid);
  out.k_rho_value = out.k_value + rho * mesh.mass_inner(q.values, q.values);
  return out;
}

ObjectiveEvaluation grad_kv(const Potential& q, const CauchyData& data, double rho,
                            const SpaceMesh& mesh, const TimeGrid& grid)
{
  check_regularization(rho);
  check_data(data, mesh, grid);
  const ForwardSolver solver(q.values, mesh, grid);
  ObjectiveEvaluation out;
  out.u_n = solver.neumann(data.flux);
  out.u_d = solver.dirichlet(data.observed);
  const Field w = out.u_n - out.u_d;
  out.k_value = kv_energy(w, q.values, mesh, grid);
  out.k_rho_value = out.k_value + rho * mesh.mass_inner(q.values, q.values);

  const Field xi_n = solve_xi_n(solver, out.u_n, out.u_d);
  const Field xi_d = solve_xi_d(solver, out.u_n, out.u_d);
  // Each state pairs with the adjoint of its own boundary kind.
  Eigen::VectorXd dual = time_integrated_product(w, w, mesh, grid) +
                         time_integrated_product(out.u_n, xi_n, mesh, grid) +
                         time_integrated_product(out.u_d, xi_d, mesh, grid) +
                         2.0 * rho * (mesh.mass() * q.values);
  out.gradient = mesh.riesz(dual);
  return out;
}

LeastSquaresEvaluation eval_ls(const Potential& q, const CauchyData& data, double mu,
                               const SpaceMesh& mesh, const TimeGrid& grid)
{
  check_regularization(mu);
  check_data(data, mesh, grid);
  LeastSquaresEvaluation out;
  out.u = ForwardSolver(q.values, mesh, grid).neumann(data.flux);
  BoundaryData residual = trace_of(out.u, mesh);
  residual.values -= data.observed.values;
  out.misfit = boundary_l2_inner(residual, residual, mesh, grid);
  out.value = out.misfit + mu * mesh.mass_inner(q.values, q.values);
  return out;
}

LeastSquaresEvaluation grad_ls(const Potential& q, const CauchyData& data, double mu,
                               const SpaceMesh& mesh, const TimeGrid& grid)
{
  check_regularization(mu);
  check_data(data, mesh, grid);
  const ForwardSolver solver(q.values, mesh, grid);
  LeastSquaresEvaluation out;
  out.u = solver.neumann(data.flux);
  BoundaryData residual = trace_of(out.u, mesh);
  residual.values -= data.observed.values;
  out.misfit = boundary_l2_inner(residual, residual, mesh, grid);
  out.value = out.misfit + mu * mesh.mass_inner(q.values, q.values);

  const Field zeta = solve_zeta_ls(solver, out.u, data.observed);
  out.gradient = mesh.riesz(time_integrated_product(out.u, zeta, mesh, grid) +
                            2.0 * mu * (mesh.mass() * q.values));
  return out;
}

} // namespace fracinv
