#pragma once

#include <vector>

#include <Eigen/Dense>

namespace fracinv {

/// Uniform time discretization on [0, T] together with the L1 weights of the
/// Caputo derivative of order alpha.
struct TimeGrid
{
  int n_steps = 0;
  double dt = 0.0;
  double final_time = 0.0;
  double alpha = 0.0;
  /// b_k = (k+1)^{1-alpha} - k^{1-alpha}, k = 0..n_steps-1
  std::vector<double> l1_weights;
  /// dt^{-alpha} / Gamma(2 - alpha)
  double l1_scale = 0.0;

  int n_nodes() const { return n_steps + 1; }
  double time(int n) const { return n * dt; }

  /// Composite trapezoid weight of time node n.
  double trapezoid_weight(int n) const
  {
    return (n == 0 || n == n_steps) ? 0.5 * dt : dt;
  }
};

TimeGrid build_time_grid(double final_time, int n_steps, double alpha);

/// L1 approximation of the Caputo derivative at t_n from nodal values
/// history[0..n].
double caputo_apply(const std::vector<double>& history, const TimeGrid& grid, int n);

/// Space-time array; rows are space nodes, columns are time nodes 0..n_steps.
class Field
{
public:
  Field() = default;
  Field(Eigen::Index n_space, Eigen::Index n_time)
    : values_(Eigen::MatrixXd::Zero(n_space, n_time))
  {}
  explicit Field(Eigen::MatrixXd values) : values_(std::move(values)) {}

  Eigen::Index n_space() const { return values_.rows(); }
  Eigen::Index n_time() const { return values_.cols(); }

  auto at_step(Eigen::Index n) { return values_.col(n); }
  auto at_step(Eigen::Index n) const { return values_.col(n); }

  double& operator()(Eigen::Index i, Eigen::Index n) { return values_(i, n); }
  double operator()(Eigen::Index i, Eigen::Index n) const { return values_(i, n); }

  Eigen::MatrixXd& values() { return values_; }
  const Eigen::MatrixXd& values() const { return values_; }

  Field& operator-=(const Field& other)
  {
    values_ -= other.values_;
    return *this;
  }
  friend Field operator-(Field a, const Field& b) { return a -= b; }

private:
  Eigen::MatrixXd values_;
};

/// Maps time index n to n_steps - n. Involution.
Field time_reverse(const Field& field);

} // namespace fracinv
