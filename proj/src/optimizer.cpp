#include "fracinv/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "fracinv/sensitivity_solver.hpp"

namespace fracinv {

namespace {

double trapezoid_sum(const TimeGrid& grid, const std::function<double(int)>& at_step)
{
  double sum = 0.0;
  for (int n = 0; n <= grid.n_steps; ++n)
    sum += grid.trapezoid_weight(n) * at_step(n);
  return sum;
}

} // namespace

StepSizeCoefficients step_coefficients(const Eigen::VectorXd& q, const Eigen::VectorXd& direction,
                                       const Field& u_n, const Field& u_d,
                                       const Field& sens_n, const Field& sens_d, double rho,
                                       const SpaceMesh& mesh, const TimeGrid& grid)
{
  const SparseMatrix energy = mesh.stiffness() + mesh.coefficient_mass(q);
  const SparseMatrix mass_p = mesh.coefficient_mass(direction);
  const Field w = u_n - u_d;
  const Field v = sens_n - sens_d;

  StepSizeCoefficients out;
  out.a = trapezoid_sum(grid, [&](int n) { return v.at_step(n).dot(mass_p * v.at_step(n)); });
  out.b = trapezoid_sum(grid, [&](int n) {
            return v.at_step(n).dot(energy * v.at_step(n)) +
                   2.0 * w.at_step(n).dot(mass_p * v.at_step(n));
          }) +
          rho * mesh.mass_inner(direction, direction);
  out.c = trapezoid_sum(grid, [&](int n) {
            return 2.0 * w.at_step(n).dot(energy * v.at_step(n)) +
                   w.at_step(n).dot(mass_p * w.at_step(n));
          }) +
          2.0 * rho * mesh.mass_inner(direction, q);
  return out;
}

double step_model_value(const Eigen::VectorXd& q, const Eigen::VectorXd& direction,
                        const Field& u_n, const Field& u_d, const Field& sens_n,
                        const Field& sens_d, double rho, double beta, const SpaceMesh& mesh,
                        const TimeGrid& grid)
{
  // K_ρ(q - βP) with u_N, u_D replaced by their first-order expansions
  const Eigen::VectorXd shifted = q - beta * direction;
  Field w = u_n - u_d;
  w.values() -= beta * (sens_n.values() - sens_d.values());
  return kv_energy(w, shifted, mesh, grid) + rho * mesh.mass_inner(shifted, shifted);
}

std::vector<double> admissible_step_roots(const StepSizeCoefficients& coeffs)
{
  // 3Aβ² - 2Bβ + C = 0, roots (B ± sqrt(B² - 3AC)) / (3A), evaluated in the
  // cancellation-free form so that A -> 0 degrades to the linear root C/(2B).
  const double a = coeffs.a, b = coeffs.b, c = coeffs.c;
  std::vector<double> roots;
  const double disc = b * b - 3.0 * a * c;
  if (!(disc >= 0.0))
    return roots;
  const double s = b + std::copysign(std::sqrt(disc), b);
  if (s != 0.0)
    roots.push_back(c / s);
  if (a != 0.0)
    roots.push_back(s / (3.0 * a));

  std::vector<double> out;
  for (double r : roots)
    if (std::isfinite(r) && r > 0.0 &&
        std::none_of(out.begin(), out.end(),
                     [r](double x) { return std::abs(x - r) <= 1e-14 * std::abs(r); }))
      out.push_back(r);
  std::sort(out.begin(), out.end());
  return out;
}

double fletcher_reeves_gamma(const Eigen::VectorXd& g_new, const Eigen::VectorXd& g_old,
                             const SpaceMesh& mesh)
{
  const double denom = mesh.mass_inner(g_old, g_old);
  if (denom < 1e-30)
    return 0.0;
  return mesh.mass_inner(g_new, g_new) / denom;
}

std::string to_string(StepBranch branch)
{
  switch (branch) {
    case StepBranch::Quadratic: return "quadratic";
    case StepBranch::ClosedForm: return "closed-form";
    case StepBranch::Armijo: return "armijo";
    case StepBranch::Failure: return "failure";
  }
  return "unknown";
}

std::string to_string(CgStatus status)
{
  switch (status) {
    case CgStatus::Converged: return "converged";
    case CgStatus::Stationary: return "stationary";
    case CgStatus::MaxIterations: return "max-iterations";
    case CgStatus::LineSearchFailure: return "line-search failure";
    case CgStatus::SolverFailure: return "solver failure";
  }
  return "unknown";
}

StepChoice armijo_backtrack(const LineEval& line_eval, double current_value, double slope,
                            const ArmijoParams& params)
{
  double beta = params.beta_init;
  for (int k = 0; k <= params.max_halvings; ++k) {
    const double value = line_eval(beta);
    if (std::isfinite(value) && value <= current_value - params.sigma * beta * slope)
      return {beta, value, StepBranch::Armijo};
    beta *= params.shrink;
  }
  return {0.0, current_value, StepBranch::Failure};
}

StepChoice select_step(const StepSizeCoefficients& coeffs, const LineEval& line_eval,
                       double current_value, double slope, const ArmijoParams& params)
{
  StepChoice best{0.0, std::numeric_limits<double>::infinity(), StepBranch::Quadratic};
  for (double root : admissible_step_roots(coeffs)) {
    const double value = line_eval(root);
    if (value < best.value)
      best = {root, value, StepBranch::Quadratic};
  }
  // Roots of the linearized model are only accepted when the true objective
  // does not increase.
  if (best.beta > 0.0 && best.value <= current_value)
    return best;
  return armijo_backtrack(line_eval, current_value, slope, params);
}

namespace {

struct Evaluated
{
  double value = 0.0;
  Eigen::VectorXd gradient;
  Field state_n;  // u_N (or u for least squares)
  Field state_d;  // u_D, unused for least squares
};

class CgObjective
{
public:
  virtual ~CgObjective() = default;
  virtual Evaluated evaluate(const Eigen::VectorXd& q) const = 0;
  virtual double value(const Eigen::VectorXd& q) const = 0;
  virtual StepChoice choose_step(const Eigen::VectorXd& q, const Eigen::VectorXd& direction,
                                 const Evaluated& at_q, double slope, const LineEval& line_eval,
                                 const CgOptions& options) const = 0;
};

class KohnVogeliusObjective final : public CgObjective
{
public:
  KohnVogeliusObjective(const ReconstructionProblem& problem, const Potential& bounds,
                        const SpaceMesh& mesh, const TimeGrid& grid)
    : problem_(problem), bounds_(bounds), mesh_(mesh), grid_(grid)
  {}

  Evaluated evaluate(const Eigen::VectorXd& q) const override
  {
    auto ev = grad_kv(as_potential(q), problem_.data, problem_.weight, mesh_, grid_);
    return {ev.k_rho_value, std::move(ev.gradient), std::move(ev.u_n), std::move(ev.u_d)};
  }

  double value(const Eigen::VectorXd& q) const override
  {
    return eval_kv(as_potential(q), problem_.data, problem_.weight, mesh_, grid_).k_rho_value;
  }

  StepChoice choose_step(const Eigen::VectorXd& q, const Eigen::VectorXd& direction,
                         const Evaluated& at_q, double slope, const LineEval& line_eval,
                         const CgOptions& options) const override
  {
    const auto coeffs = local_coefficients(q, direction, at_q.state_n, at_q.state_d);
    StepChoice step = select_step(coeffs, line_eval, at_q.value, slope, options.armijo);
    if (step.branch == StepBranch::Quadratic)
      refine(q, direction, slope, at_q.value, step, options);
    return step;
  }

private:
  StepSizeCoefficients local_coefficients(const Eigen::VectorXd& q, const Eigen::VectorXd& direction,
                                          const Field& u_n, const Field& u_d) const
  {
    const ForwardSolver solver(q, mesh_, grid_);
    const Field sens_n = solve_sensitivity_neumann(solver, direction, u_n);
    const Field sens_d = solve_sensitivity_dirichlet(solver, direction, u_d);
    return step_coefficients(q, direction, u_n, u_d, sens_n, sens_d, problem_.weight, mesh_,
                             grid_);
  }

  // Newton-like correction of the model root: the model rebuilt at q - βP has
  // the exact line slope -C there, and its root nearest zero updates β. The
  // slope signs bracket the line minimizer. The projected line is only
  // piecewise smooth, with kinks where a node reaches a bound; breakpoints
  // inside the bracket are bisected first, and a kink whose one-sided slopes
  // straddle zero is itself the minimizer.
  void refine(const Eigen::VectorXd& q, const Eigen::VectorXd& direction, double slope,
              double current_value, StepChoice& step, const CgOptions& options) const
  {
    const double tol = options.refine_tol;
    double lo = 0.0, lo_ratio = 1.0;  // ratio = ψ'(β) / ψ'(0)
    double hi = std::numeric_limits<double>::infinity(), hi_ratio = 0.0;
    double beta = step.beta;
    Eigen::Index kink = -1;  // node reaching its bound exactly at β
    for (int k = 0; k < options.max_refinements; ++k) {
      Potential at{q - beta * direction, bounds_.lower, bounds_.upper};
      at.project();
      if (kink >= 0)
        at.values(kink) = direction(kink) > 0.0 ? bounds_.lower : bounds_.upper;
      Eigen::VectorXd right = direction;
      for (Eigen::Index i = 0; i < right.size(); ++i)
        if ((at.values(i) <= bounds_.lower && right(i) > 0.0) ||
            (at.values(i) >= bounds_.upper && right(i) < 0.0))
          right(i) = 0.0;
      const auto ev = eval_kv(at, problem_.data, problem_.weight, mesh_, grid_);
      if (k > 0) {
        // Near the minimizer the values are flat to rounding; only guard
        // against leaving the descent region.
        if (!(ev.k_rho_value <= current_value + 1e-12 * std::abs(current_value)))
          return;
        step.beta = beta;
        step.value = std::min(ev.k_rho_value, current_value);
      }
      const auto model = local_coefficients(at.values, right, ev.u_n, ev.u_d);
      const double r_plus = model.c / slope;
      double r_minus = r_plus;
      if (kink >= 0) {
        Eigen::VectorXd left = right;
        left(kink) = direction(kink);
        r_minus = local_coefficients(at.values, left, ev.u_n, ev.u_d).c / slope;
      }
      if (r_minus >= -tol && r_plus <= tol)
        return;
      if (r_plus > 0.0)
        lo = beta, lo_ratio = r_plus;
      else
        hi = beta, hi_ratio = r_minus;

      kink = std::isfinite(hi) ? median_breakpoint(q, direction, lo, hi) : -1;
      if (kink >= 0) {
        beta = breakpoint(q, direction, kink);
        continue;
      }
      double shift = std::numeric_limits<double>::quiet_NaN();
      const double disc = model.b * model.b - 3.0 * model.a * model.c;
      if (disc >= 0.0) {
        const double s = model.b + std::copysign(std::sqrt(disc), model.b);
        if (s != 0.0)
          shift = model.c / s;
      }
      if (!std::isfinite(shift) && model.b != 0.0)
        shift = model.c / (2.0 * model.b);
      beta += shift;
      if (!std::isfinite(beta) || beta <= lo || beta >= hi) {
        if (!std::isfinite(hi))
          return;
        beta = lo + (hi - lo) * lo_ratio / (lo_ratio - hi_ratio);
      }
    }
  }

  // Step at which node i of q - βP reaches the bound P pushes it toward.
  double breakpoint(const Eigen::VectorXd& q, const Eigen::VectorXd& direction,
                    Eigen::Index i) const
  {
    const double bound = direction(i) > 0.0 ? bounds_.lower : bounds_.upper;
    return (q(i) - bound) / direction(i);
  }

  Eigen::Index median_breakpoint(const Eigen::VectorXd& q, const Eigen::VectorXd& direction,
                                 double lo, double hi) const
  {
    std::vector<std::pair<double, Eigen::Index>> inside;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (direction(i) == 0.0)
        continue;
      const double b = breakpoint(q, direction, i);
      if (b > lo && b < hi)
        inside.emplace_back(b, i);
    }
    if (inside.empty())
      return -1;
    auto mid = inside.begin() + inside.size() / 2;
    std::nth_element(inside.begin(), mid, inside.end());
    return mid->second;
  }

  double value_at(const Eigen::VectorXd& q) const
  {
    return eval_kv(as_potential(q), problem_.data, problem_.weight, mesh_, grid_).k_rho_value;
  }

  Potential as_potential(const Eigen::VectorXd& q) const
  {
    return {q, bounds_.lower, bounds_.upper};
  }

  const ReconstructionProblem& problem_;
  const Potential& bounds_;
  const SpaceMesh& mesh_;
  const TimeGrid& grid_;
};

class LeastSquaresObjective final : public CgObjective
{
public:
  LeastSquaresObjective(const ReconstructionProblem& problem, const Potential& bounds,
                        const SpaceMesh& mesh, const TimeGrid& grid)
    : problem_(problem), bounds_(bounds), mesh_(mesh), grid_(grid)
  {}

  Evaluated evaluate(const Eigen::VectorXd& q) const override
  {
    auto ev = grad_ls(as_potential(q), problem_.data, problem_.weight, mesh_, grid_);
    return {ev.value, std::move(ev.gradient), std::move(ev.u), Field{}};
  }

  double value(const Eigen::VectorXd& q) const override
  {
    return eval_ls(as_potential(q), problem_.data, problem_.weight, mesh_, grid_).value;
  }

  StepChoice choose_step(const Eigen::VectorXd& q, const Eigen::VectorXd& direction,
                         const Evaluated& at_q, double slope, const LineEval& line_eval,
                         const CgOptions& options) const override
  {
    const ArmijoParams& armijo = options.armijo;
    // Minimizer of the linearized misfit ‖r - βU‖² + μ‖q - βP‖².
    const ForwardSolver solver(q, mesh_, grid_);
    const BoundaryData sens = trace_of(solve_sensitivity_neumann(solver, direction, at_q.state_n), mesh_);
    BoundaryData residual = trace_of(at_q.state_n, mesh_);
    residual.values -= problem_.data.observed.values;
    const double mu = problem_.weight;
    const double numer =
      boundary_l2_inner(residual, sens, mesh_, grid_) + mu * mesh_.mass_inner(direction, q);
    const double denom =
      boundary_l2_inner(sens, sens, mesh_, grid_) + mu * mesh_.mass_inner(direction, direction);
    if (denom > 0.0) {
      const double beta = numer / denom;
      if (std::isfinite(beta) && beta > 0.0) {
        const double value = line_eval(beta);
        if (value <= at_q.value)
          return {beta, value, StepBranch::ClosedForm};
      }
    }
    return armijo_backtrack(line_eval, at_q.value, slope, armijo);
  }

private:
  Potential as_potential(const Eigen::VectorXd& q) const
  {
    return {q, bounds_.lower, bounds_.upper};
  }

  const ReconstructionProblem& problem_;
  const Potential& bounds_;
  const SpaceMesh& mesh_;
  const TimeGrid& grid_;
};

} // namespace

CgResult run_cgm(const ReconstructionProblem& problem, const Potential& q0,
                 const SpaceMesh& mesh, const TimeGrid& grid, const CgOptions& options,
                 const std::function<double(const Eigen::VectorXd&)>& error_metric,
                 const std::function<void(const CgIterate&)>& observer)
{
  if (!q0.within_bounds())
    throw std::invalid_argument("initial potential violates its bounds");
  if (q0.values.size() != mesh.n_nodes())
    throw std::invalid_argument("initial potential size does not match mesh");

  std::unique_ptr<CgObjective> objective;
  if (problem.kind == ObjectiveKind::KohnVogelius)
    objective = std::make_unique<KohnVogeliusObjective>(problem, q0, mesh, grid);
  else
    objective = std::make_unique<LeastSquaresObjective>(problem, q0, mesh, grid);

  CgResult result;
  result.q = q0;
  CgHistory& h = result.history;
  auto record = [&](const Evaluated& ev, const Eigen::VectorXd& q) {
    h.k_rho.push_back(ev.value);
    h.grad_norm.push_back(mesh.l2_norm(ev.gradient));
    h.beta.push_back(0.0);
    h.gamma.push_back(0.0);
    h.rel_error.push_back(error_metric ? error_metric(q)
                                       : std::numeric_limits<double>::quiet_NaN());
    h.branch.push_back(StepBranch::Failure);
  };

  Eigen::VectorXd q = q0.values;
  int n = 0;
  try {
    Evaluated current = objective->evaluate(q);
    record(current, q);
    Eigen::VectorXd direction, previous_gradient;

    result.status = CgStatus::MaxIterations;
    while (n < options.max_it) {
      if (h.grad_norm.back() <= options.grad_tol) {
        result.status = CgStatus::Stationary;
        break;
      }

      double gamma = 0.0;
      if (n == 0) {
        direction = current.gradient;
      } else {
        gamma = fletcher_reeves_gamma(current.gradient, previous_gradient, mesh);
        direction = current.gradient + gamma * direction;
      }
      // Components pushing into an active bound cannot move under projection.
      auto freeze_active = [&](Eigen::VectorXd& d) {
        for (Eigen::Index i = 0; i < d.size(); ++i)
          if ((q(i) <= q0.lower && d(i) > 0.0) || (q(i) >= q0.upper && d(i) < 0.0))
            d(i) = 0.0;
      };
      freeze_active(direction);
      double slope = mesh.mass_inner(current.gradient, direction);
      if (!(slope > 0.0)) {
        gamma = 0.0;
        direction = current.gradient;
        freeze_active(direction);
        slope = mesh.mass_inner(current.gradient, direction);
      }
      if (!(slope > 0.0)) {
        result.status = CgStatus::Stationary;
        result.message = "projected gradient vanishes";
        break;
      }

      auto project = [&](double beta) {
        Potential trial{q - beta * direction, q0.lower, q0.upper};
        trial.project();
        return trial.values;
      };
      const LineEval line_eval = [&](double beta) { return objective->value(project(beta)); };
      const StepChoice step =
        objective->choose_step(q, direction, current, slope, line_eval, options);
      h.gamma.back() = gamma;
      h.branch.back() = step.branch;
      if (step.branch == StepBranch::Failure) {
        result.status = CgStatus::LineSearchFailure;
        result.message = "no sufficient decrease after " +
                         std::to_string(options.armijo.max_halvings) + " halvings";
        break;
      }
      h.beta.back() = step.beta;

      Potential next{q - step.beta * direction, q0.lower, q0.upper};
      const bool clamped = next.project();
      if (observer)
        observer({n, q, current.gradient, direction, current.value, step.beta, gamma,
                  step.branch, clamped});

      const double change = mesh.l2_norm(next.values - q) / mesh.l2_norm(q);
      previous_gradient = std::move(current.gradient);
      q = std::move(next.values);
      current = objective->evaluate(q);
      record(current, q);
      ++n;
      if (change <= options.tol) {
        result.status = CgStatus::Converged;
        break;
      }
    }
  } catch (const SolverError& e) {
    result.status = CgStatus::SolverFailure;
    result.message = e.what();
  }
  result.q.values = q;
  result.iterations = n;
  return result;
}

} // namespace fracinv
