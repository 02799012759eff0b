#pragma once

#include <cmath>
#include <random>

#include "fracinv/experiment.hpp"

namespace fracinv::testing {

/// Small 1D problem with same-grid synthetic data from q_true.
struct SmallProblem
{
  SpaceMesh mesh;
  TimeGrid grid;
  Potential q_true;
  CauchyData data;
};

inline SmallProblem small_problem(int n_cells = 29, int n_steps = 20, double alpha = 0.5,
                                  const std::string& target = "1 + x",
                                  const std::string& flux = "t^2*(1 + x)")
{
  ExperimentConfig c;
  c.n_cells = n_cells;
  c.n_steps = n_steps;
  c.alpha = alpha;
  c.q_true = target;
  c.neumann_expr = flux;
  SmallProblem p{build_mesh(c), build_grid(c), make_target(target, build_mesh(c)), {}};
  p.data = generate_observation(c);
  return p;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng, double lo = -1.0,
                                     double hi = 1.0)
{
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = u(rng);
  return v;
}

inline Field random_field(Eigen::Index n_space, Eigen::Index n_time, std::mt19937_64& rng)
{
  Field f(n_space, n_time);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Eigen::Index i = 0; i < n_space; ++i)
    for (Eigen::Index n = 0; n < n_time; ++n)
      f(i, n) = u(rng);
  return f;
}

/// Smooth random admissible potential: 1 + small modes plus nodal jitter.
inline Potential random_potential(const SpaceMesh& mesh, std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  const double a = u(rng), b = u(rng);
  Potential q{Eigen::VectorXd(mesh.n_nodes())};
  for (Eigen::Index i = 0; i < mesh.n_nodes(); ++i)
    q.values(i) = 1.5 + a * std::sin(mesh.x(i)) + b * std::cos(2.0 * mesh.x(i)) + 0.1 * u(rng);
  return q;
}

inline double relative_gap(double a, double b)
{
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

} // namespace fracinv::testing
