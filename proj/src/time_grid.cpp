#include "fracinv/time_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracinv {

TimeGrid build_time_grid(double final_time, int n_steps, double alpha)
{
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("fractional order must lie in (0,1), got " + std::to_string(alpha));
  if (!(final_time > 0.0))
    throw std::invalid_argument("final time must be positive");
  if (n_steps < 2)
    throw std::invalid_argument("need at least 2 time steps");

  TimeGrid grid;
  grid.n_steps = n_steps;
  grid.final_time = final_time;
  grid.alpha = alpha;
  grid.dt = final_time / n_steps;
  grid.l1_scale = std::pow(grid.dt, -alpha) / std::tgamma(2.0 - alpha);

  const double p = 1.0 - alpha;
  grid.l1_weights.resize(n_steps);
  for (int k = 0; k < n_steps; ++k)
    grid.l1_weights[k] = std::pow(k + 1.0, p) - std::pow(double(k), p);
  return grid;
}

double caputo_apply(const std::vector<double>& history, const TimeGrid& grid, int n)
{
  if (n < 1 || n > grid.n_steps || history.size() < static_cast<std::size_t>(n + 1))
    throw std::invalid_argument("caputo_apply: need history u^0..u^n with 1 <= n <= n_steps");
  double sum = 0.0;
  for (int k = 0; k < n; ++k)
    sum += grid.l1_weights[k] * (history[n - k] - history[n - k - 1]);
  return grid.l1_scale * sum;
}

Field time_reverse(const Field& field)
{
  return Field(field.values().rowwise().reverse().eval());
}

} // namespace fracinv
