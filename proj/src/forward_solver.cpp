#include "fracinv/forward_solver.hpp"

#include <Eigen/IterativeLinearSolvers>

#include "fracinv/tridiagonal.hpp"

namespace fracinv {

namespace {

constexpr double kPcgTolerance = 1e-10;

SparseMatrix select(const SparseMatrix& a, const std::vector<int>& rows,
                    const std::vector<int>& cols, Eigen::Index n)
{
  std::vector<int> row_pos(n, -1), col_pos(n, -1);
  for (std::size_t k = 0; k < rows.size(); ++k)
    row_pos[rows[k]] = static_cast<int>(k);
  for (std::size_t k = 0; k < cols.size(); ++k)
    col_pos[cols[k]] = static_cast<int>(k);

  std::vector<Eigen::Triplet<double>> entries;
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const int r = row_pos[it.row()], c = col_pos[it.col()];
      if (r >= 0 && c >= 0)
        entries.emplace_back(r, c, it.value());
    }
  SparseMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

using Pcg = Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                                     Eigen::DiagonalPreconditioner<double>>;

} // namespace

struct StepOperator::Impl
{
  const SpaceMesh* mesh = nullptr;
  SparseMatrix system;    // acting on the unknowns
  SparseMatrix coupling;  // interior x boundary, Dirichlet only
  TridiagonalSolver direct;
  Pcg iterative;
  bool use_direct = true;

  Eigen::VectorXd solve_system(const Eigen::VectorXd& rhs, const Eigen::VectorXd& guess) const
  {
    if (use_direct)
      return direct.solve(rhs);
    Eigen::VectorXd x = iterative.solveWithGuess(rhs, guess);
    if (iterative.info() != Eigen::Success)
      throw SolverError("per-step PCG did not converge (relative residual " +
                          std::to_string(iterative.error()) + ")",
                        iterative.error());
    return x;
  }
};

StepOperator::StepOperator(const Eigen::VectorXd& q, BoundaryKind kind, const SpaceMesh& mesh,
                           const TimeGrid& grid)
  : kind_(kind), impl_(std::make_unique<Impl>())
{
  impl_->mesh = &mesh;
  const SparseMatrix full = grid.l1_scale * grid.l1_weights[0] * mesh.mass() +
                            mesh.stiffness() + mesh.coefficient_mass(q);
  if (kind == BoundaryKind::Neumann) {
    impl_->system = full;
  } else {
    impl_->system = select(full, mesh.interior_idx(), mesh.interior_idx(), mesh.n_nodes());
    impl_->coupling = select(full, mesh.interior_idx(), mesh.boundary_idx(), mesh.n_nodes());
  }
  impl_->use_direct = mesh.dim() == 1;
  if (impl_->use_direct) {
    impl_->direct = TridiagonalSolver(impl_->system);
  } else {
    impl_->iterative.setTolerance(kPcgTolerance);
    impl_->iterative.setMaxIterations(10 * static_cast<Eigen::Index>(impl_->system.rows()));
    impl_->iterative.compute(impl_->system);
  }
}

StepOperator::~StepOperator() = default;
StepOperator::StepOperator(StepOperator&&) noexcept = default;
StepOperator& StepOperator::operator=(StepOperator&&) noexcept = default;

Eigen::VectorXd StepOperator::solve(const Eigen::VectorXd& rhs,
                                    const Eigen::VectorXd* boundary_values,
                                    const Eigen::VectorXd& guess) const
{
  if (kind_ == BoundaryKind::Neumann)
    return impl_->solve_system(rhs, guess);

  const SpaceMesh& mesh = *impl_->mesh;
  const auto& interior = mesh.interior_idx();
  const auto& boundary = mesh.boundary_idx();
  Eigen::VectorXd reduced(static_cast<Eigen::Index>(interior.size()));
  Eigen::VectorXd reduced_guess(reduced.size());
  for (std::size_t k = 0; k < interior.size(); ++k) {
    reduced(k) = rhs(interior[k]);
    reduced_guess(k) = guess(interior[k]);
  }
  if (boundary_values)
    reduced -= impl_->coupling * *boundary_values;

  const Eigen::VectorXd solved = impl_->solve_system(reduced, reduced_guess);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.n_nodes());
  for (std::size_t k = 0; k < interior.size(); ++k)
    u(interior[k]) = solved(k);
  if (boundary_values)
    for (std::size_t k = 0; k < boundary.size(); ++k)
      u(boundary[k]) = (*boundary_values)(k);
  return u;
}

ForwardSolver::ForwardSolver(const Eigen::VectorXd& q, const SpaceMesh& mesh,
                             const TimeGrid& grid)
  : q_(q), mesh_(&mesh), grid_(&grid)
{
  if (q.size() != mesh.n_nodes())
    throw std::invalid_argument("potential size does not match mesh");
}

const StepOperator& ForwardSolver::op(BoundaryKind kind) const
{
  auto& slot = kind == BoundaryKind::Neumann ? neumann_op_ : dirichlet_op_;
  if (!slot)
    slot.emplace(q_, kind, *mesh_, *grid_);
  return *slot;
}

Field ForwardSolver::march(const Eigen::MatrixXd& loads, BoundaryKind kind,
                           const Eigen::MatrixXd* boundary_values) const
{
  const SpaceMesh& mesh = *mesh_;
  const TimeGrid& grid = *grid_;
  const Eigen::Index n_space = mesh.n_nodes();
  if (loads.rows() != n_space || loads.cols() != grid.n_nodes())
    throw std::invalid_argument("load array shape mismatch");
  if (boundary_values && (boundary_values->rows() != mesh.n_boundary() ||
                          boundary_values->cols() != grid.n_nodes()))
    throw std::invalid_argument("boundary data shape mismatch");

  const StepOperator& step = op(kind);
  const auto& b = grid.l1_weights;
  Field u(n_space, grid.n_nodes());
  Eigen::VectorXd history(n_space);
  for (int n = 1; n <= grid.n_steps; ++n) {
    // Σ_{k=0}^{n-1} b_k (u^{n-k} - u^{n-k-1}) = b_0 u^n + history
    history = -b[0] * u.at_step(n - 1);
    for (int k = 1; k < n; ++k)
      history += b[k] * (u.at_step(n - k) - u.at_step(n - k - 1));
    const Eigen::VectorXd rhs = loads.col(n) - grid.l1_scale * (mesh.mass() * history);
    Eigen::VectorXd bv;
    if (boundary_values)
      bv = boundary_values->col(n);
    u.at_step(n) = step.solve(rhs, boundary_values ? &bv : nullptr, u.at_step(n - 1));
  }
  return u;
}

Eigen::MatrixXd ForwardSolver::source_loads(const Field& source) const
{
  if (source.n_space() != mesh_->n_nodes() || source.n_time() != grid_->n_nodes())
    throw std::invalid_argument("source field shape mismatch");
  return mesh_->mass() * source.values();
}

Field ForwardSolver::neumann(const BoundaryData& flux, const Field* source) const
{
  if (flux.values.rows() != mesh_->n_boundary() || flux.values.cols() != grid_->n_nodes())
    throw std::invalid_argument("flux data shape mismatch");
  Eigen::MatrixXd loads = source ? source_loads(*source)
                                 : Eigen::MatrixXd::Zero(mesh_->n_nodes(), grid_->n_nodes());
  for (int n = 0; n <= grid_->n_steps; ++n)
    loads.col(n) += mesh_->boundary_load(flux.values.col(n));
  return march(loads, BoundaryKind::Neumann);
}

Field ForwardSolver::dirichlet(const BoundaryData& trace, const Field* source) const
{
  const Eigen::MatrixXd loads = source ? source_loads(*source)
                                       : Eigen::MatrixXd::Zero(mesh_->n_nodes(), grid_->n_nodes());
  return march(loads, BoundaryKind::Dirichlet, &trace.values);
}

Field ForwardSolver::backward(const Eigen::MatrixXd& loads, BoundaryKind kind) const
{
  const int steps = grid_->n_steps;
  if (loads.rows() != mesh_->n_nodes() || loads.cols() != grid_->n_nodes())
    throw std::invalid_argument("load array shape mismatch");

  // The L1 step matrix is block lower-triangular Toeplitz over the unknown
  // steps 1..N, so its transpose is the same operator with those steps
  // reversed. Trapezoid weights (1, ..., 1, 1/2) turn the plain transpose into
  // the adjoint for the trapezoid-in-time inner product.
  auto weight = [steps](int n) { return n == steps ? 0.5 : 1.0; };
  Eigen::MatrixXd reversed = Eigen::MatrixXd::Zero(loads.rows(), loads.cols());
  for (int n = 1; n <= steps; ++n)
    reversed.col(steps + 1 - n) = weight(n) * loads.col(n);

  const Field forward = march(reversed, kind);
  Field xi(mesh_->n_nodes(), grid_->n_nodes());
  for (int n = 1; n <= steps; ++n)
    xi.at_step(n) = forward.at_step(steps + 1 - n) / weight(n);
  return xi;
}

Field solve_neumann(const Potential& q, const BoundaryData& flux, const Field* source,
                    const SpaceMesh& mesh, const TimeGrid& grid)
{
  return ForwardSolver(q.values, mesh, grid).neumann(flux, source);
}

Field solve_dirichlet(const Potential& q, const BoundaryData& trace, const Field* source,
                      const SpaceMesh& mesh, const TimeGrid& grid)
{
  return ForwardSolver(q.values, mesh, grid).dirichlet(trace, source);
}

Field solve_backward(const Potential& q, const Eigen::MatrixXd& loads, BoundaryKind kind,
                     const SpaceMesh& mesh, const TimeGrid& grid)
{
  return ForwardSolver(q.values, mesh, grid).backward(loads, kind);
}

} // namespace fracinv
