#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracinv/objective.hpp"

namespace fracinv {

/// Coefficients of the step-size equation -3Aβ² + 2Bβ - C = 0, the stationarity
/// condition of the cubic model of β ↦ K_ρ(q - βP) built from the sensitivities.
struct StepSizeCoefficients
{
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  /// Derivative of the cubic model at β: -C + 2Bβ - 3Aβ².
  double model_slope(double beta) const { return -c + 2.0 * b * beta - 3.0 * a * beta * beta; }
};

StepSizeCoefficients step_coefficients(const Eigen::VectorXd& q, const Eigen::VectorXd& direction,
                                       const Field& u_n, const Field& u_d,
                                       const Field& sens_n, const Field& sens_d, double rho,
                                       const SpaceMesh& mesh, const TimeGrid& grid);

/// Value of the cubic model ψ(β) minus its β-independent part. Exposed for
/// checking the coefficients against a numerical derivative.
double step_model_value(const Eigen::VectorXd& q, const Eigen::VectorXd& direction,
                        const Field& u_n, const Field& u_d, const Field& sens_n,
                        const Field& sens_d, double rho, double beta, const SpaceMesh& mesh,
                        const TimeGrid& grid);

/// Positive real roots of -3Aβ² + 2Bβ - C = 0 (linear when A vanishes).
std::vector<double> admissible_step_roots(const StepSizeCoefficients& coeffs);

double fletcher_reeves_gamma(const Eigen::VectorXd& g_new, const Eigen::VectorXd& g_old,
                             const SpaceMesh& mesh);

struct ArmijoParams
{
  double sigma = 1e-4;
  double shrink = 0.5;
  double beta_init = 1.0;
  int max_halvings = 40;
};

enum class StepBranch { Quadratic, ClosedForm, Armijo, Failure };
std::string to_string(StepBranch branch);

struct StepChoice
{
  double beta = 0.0;
  double value = 0.0;  // objective at the accepted step
  StepBranch branch = StepBranch::Failure;
};

using LineEval = std::function<double(double)>;

/// Backtracking until value(β) <= current - σβ·slope.
StepChoice armijo_backtrack(const LineEval& line_eval, double current_value, double slope,
                            const ArmijoParams& params);

/// Quadratic-root step with Armijo fallback. slope is <K'_ρ(q_n), P_n>.
StepChoice select_step(const StepSizeCoefficients& coeffs, const LineEval& line_eval,
                       double current_value, double slope, const ArmijoParams& params = {});

enum class ObjectiveKind { KohnVogelius, LeastSquares };

struct CgOptions
{
  double tol = 1e-7;
  int max_it = 500;
  double grad_tol = 1e-10;
  ArmijoParams armijo;
  // A quadratic-root step is re-linearized at the trial point until the exact
  // line slope falls below refine_tol times its value at β = 0 (at a bound
  // kink: until the one-sided slopes straddle zero within that tolerance).
  double refine_tol = 5e-5;
  int max_refinements = 40;
};

enum class CgStatus { Converged, Stationary, MaxIterations, LineSearchFailure, SolverFailure };
std::string to_string(CgStatus status);

struct CgIterate
{
  int iteration = 0;
  Eigen::VectorXd q;
  Eigen::VectorXd gradient;
  Eigen::VectorXd direction;
  double value = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  StepBranch branch = StepBranch::Failure;
  bool clamped = false;
};

struct CgHistory
{
  std::vector<double> k_rho;
  std::vector<double> grad_norm;
  std::vector<double> beta;
  std::vector<double> gamma;
  std::vector<double> rel_error;
  std::vector<StepBranch> branch;
};

struct CgResult
{
  Potential q;
  CgStatus status = CgStatus::MaxIterations;
  std::string message;
  int iterations = 0;
  CgHistory history;
};

struct ReconstructionProblem
{
  ObjectiveKind kind = ObjectiveKind::KohnVogelius;
  CauchyData data;
  double weight = 0.0;  // ρ for Kohn-Vogelius, μ for least squares
};

/**
 * Fletcher-Reeves conjugate gradient for min K_ρ (or the least-squares J)
 * over the box [lower, upper].
 *
 * Row n of the history belongs to iterate q_n; beta/gamma are the values used
 * to leave q_n (zero on the last row). error_metric, when given, fills
 * rel_error. observer sees every accepted step.
 */
CgResult run_cgm(const ReconstructionProblem& problem, const Potential& q0,
                 const SpaceMesh& mesh, const TimeGrid& grid, const CgOptions& options = {},
                 const std::function<double(const Eigen::VectorXd&)>& error_metric = {},
                 const std::function<void(const CgIterate&)>& observer = {});

} // namespace fracinv
