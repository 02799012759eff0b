#include "fracinv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracinv {

namespace {

using Triplet = Eigen::Triplet<double>;

// ∫_e λ_a λ_b λ_c on a 1D element of length h
constexpr double kCubeWeight = 1.0 / 4.0;
constexpr double kMixedWeight = 1.0 / 12.0;

} // namespace

void SpaceMesh::finish_boundary(const std::vector<bool>& on_boundary)
{
  boundary_.clear();
  interior_.clear();
  boundary_slot_.assign(on_boundary.size(), -1);
  for (std::size_t i = 0; i < on_boundary.size(); ++i) {
    if (on_boundary[i]) {
      boundary_slot_[i] = static_cast<int>(boundary_.size());
      boundary_.push_back(static_cast<int>(i));
    } else {
      interior_.push_back(static_cast<int>(i));
    }
  }
}

SpaceMesh build_interval_mesh(double a, double b, int n_cells)
{
  if (!(a < b))
    throw std::invalid_argument("interval mesh needs a < b");
  if (n_cells < 2)
    throw std::invalid_argument("interval mesh needs at least 2 cells");

  SpaceMesh mesh;
  mesh.dim_ = 1;
  mesh.n_x_ = n_cells;
  mesh.n_y_ = 0;
  mesh.hx_ = (b - a) / n_cells;
  mesh.hy_ = 0.0;
  mesh.measure_ = b - a;

  const int n = n_cells + 1;
  mesh.coords_.resize(n, 1);
  for (int i = 0; i < n; ++i)
    mesh.coords_(i, 0) = (i == n_cells) ? b : a + i * mesh.hx_;

  const double h = mesh.hx_;
  std::vector<Triplet> stiff, mass;
  stiff.reserve(4 * n_cells);
  mass.reserve(4 * n_cells);
  for (int e = 0; e < n_cells; ++e) {
    const int i = e, j = e + 1;
    stiff.emplace_back(i, i, 1.0 / h);
    stiff.emplace_back(j, j, 1.0 / h);
    stiff.emplace_back(i, j, -1.0 / h);
    stiff.emplace_back(j, i, -1.0 / h);
    mass.emplace_back(i, i, h / 3.0);
    mass.emplace_back(j, j, h / 3.0);
    mass.emplace_back(i, j, h / 6.0);
    mass.emplace_back(j, i, h / 6.0);
  }
  mesh.stiffness_.resize(n, n);
  mesh.stiffness_.setFromTriplets(stiff.begin(), stiff.end());
  mesh.mass_.resize(n, n);
  mesh.mass_.setFromTriplets(mass.begin(), mass.end());
  mesh.mass_solver_ = TridiagonalSolver(mesh.mass_);

  std::vector<bool> on_boundary(n, false);
  on_boundary.front() = on_boundary.back() = true;
  mesh.finish_boundary(on_boundary);
  mesh.boundary_weights_ = Eigen::VectorXd::Ones(2);
  return mesh;
}

SpaceMesh build_square_mesh(int n_x, int n_y)
{
  if (n_x < 2 || n_y < 2)
    throw std::invalid_argument("square mesh needs at least 2 cells per axis");

  SpaceMesh mesh;
  mesh.dim_ = 2;
  mesh.n_x_ = n_x;
  mesh.n_y_ = n_y;
  mesh.hx_ = 1.0 / n_x;
  mesh.hy_ = 1.0 / n_y;
  mesh.measure_ = 1.0;

  const int px = n_x + 1, py = n_y + 1, n = px * py;
  auto id = [px](int i, int j) { return i + j * px; };

  mesh.coords_.resize(n, 2);
  for (int j = 0; j < py; ++j)
    for (int i = 0; i < px; ++i) {
      mesh.coords_(id(i, j), 0) = (i == n_x) ? 1.0 : i * mesh.hx_;
      mesh.coords_(id(i, j), 1) = (j == n_y) ? 1.0 : j * mesh.hy_;
    }

  // Each cell split into two right triangles; P1 element stiffness on a right
  // triangle with legs hx (x-direction) and hy (y-direction) at the corner node.
  const double hx = mesh.hx_, hy = mesh.hy_;
  const double rx = 0.5 * hy / hx, ry = 0.5 * hx / hy;
  const double tri_mass = hx * hy / 6.0;
  std::vector<Triplet> stiff;
  stiff.reserve(18 * n_x * n_y);
  Eigen::VectorXd lumped = Eigen::VectorXd::Zero(n);

  auto add_triangle = [&](int corner, int along_x, int along_y) {
    // corner: right-angle vertex; along_x differs in x, along_y differs in y
    const int v[3] = {corner, along_x, along_y};
    const double k[3][3] = {{rx + ry, -rx, -ry}, {-rx, rx, 0.0}, {-ry, 0.0, ry}};
    for (int a = 0; a < 3; ++a) {
      lumped(v[a]) += tri_mass;
      for (int b = 0; b < 3; ++b)
        if (k[a][b] != 0.0)
          stiff.emplace_back(v[a], v[b], k[a][b]);
    }
  };

  for (int j = 0; j < n_y; ++j)
    for (int i = 0; i < n_x; ++i) {
      add_triangle(id(i, j), id(i + 1, j), id(i, j + 1));
      add_triangle(id(i + 1, j + 1), id(i, j + 1), id(i + 1, j));
    }

  mesh.stiffness_.resize(n, n);
  mesh.stiffness_.setFromTriplets(stiff.begin(), stiff.end());
  mesh.stiffness_.prune(0.0);
  mesh.mass_.resize(n, n);
  std::vector<Triplet> diag;
  diag.reserve(n);
  for (int i = 0; i < n; ++i)
    diag.emplace_back(i, i, lumped(i));
  mesh.mass_.setFromTriplets(diag.begin(), diag.end());

  std::vector<bool> on_boundary(n, false);
  for (int j = 0; j < py; ++j)
    for (int i = 0; i < px; ++i)
      on_boundary[id(i, j)] = (i == 0 || j == 0 || i == n_x || j == n_y);
  mesh.finish_boundary(on_boundary);

  mesh.boundary_weights_.resize(mesh.n_boundary());
  for (Eigen::Index s = 0; s < mesh.n_boundary(); ++s) {
    const int node = mesh.boundary_[s];
    const int i = node % px, j = node / px;
    double w = 0.0;
    if (j == 0 || j == n_y)  // horizontal edges
      w += (i == 0 || i == n_x) ? 0.5 * hx : hx;
    if (i == 0 || i == n_x)  // vertical edges
      w += (j == 0 || j == n_y) ? 0.5 * hy : hy;
    mesh.boundary_weights_(s) = w;
  }
  return mesh;
}

SparseMatrix SpaceMesh::coefficient_mass(const Eigen::VectorXd& q) const
{
  const Eigen::Index n = n_nodes();
  if (q.size() != n)
    throw std::invalid_argument("coefficient size does not match mesh");
  SparseMatrix mq(n, n);
  std::vector<Triplet> entries;
  if (dim_ == 2) {
    entries.reserve(n);
    for (Eigen::Index i = 0; i < n; ++i)
      entries.emplace_back(i, i, mass_.coeff(i, i) * q(i));
  } else {
    entries.reserve(4 * n_x_);
    const double h = hx_;
    for (int e = 0; e < n_x_; ++e) {
      const int i = e, j = e + 1;
      entries.emplace_back(i, i, h * (kCubeWeight * q(i) + kMixedWeight * q(j)));
      entries.emplace_back(j, j, h * (kMixedWeight * q(i) + kCubeWeight * q(j)));
      const double off = h * kMixedWeight * (q(i) + q(j));
      entries.emplace_back(i, j, off);
      entries.emplace_back(j, i, off);
    }
  }
  mq.setFromTriplets(entries.begin(), entries.end());
  return mq;
}

Eigen::VectorXd SpaceMesh::coefficient_mass_derivative(const Eigen::VectorXd& a,
                                                       const Eigen::VectorXd& b) const
{
  const Eigen::Index n = n_nodes();
  if (a.size() != n || b.size() != n)
    throw std::invalid_argument("vector size does not match mesh");
  if (dim_ == 2)
    return mass_.diagonal().cwiseProduct(a).cwiseProduct(b);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  const double h = hx_;
  for (int e = 0; e < n_x_; ++e) {
    const int i = e, j = e + 1;
    const double cross = kMixedWeight * (a(i) * b(j) + a(j) * b(i));
    out(i) += h * (kCubeWeight * a(i) * b(i) + cross + kMixedWeight * a(j) * b(j));
    out(j) += h * (kCubeWeight * a(j) * b(j) + cross + kMixedWeight * a(i) * b(i));
  }
  return out;
}

double SpaceMesh::mass_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const
{
  return a.dot(mass_ * b);
}

double SpaceMesh::l2_norm(const Eigen::VectorXd& a) const
{
  return std::sqrt(std::max(0.0, mass_inner(a, a)));
}

Eigen::VectorXd SpaceMesh::riesz(const Eigen::VectorXd& dual) const
{
  if (dim_ == 2)
    return dual.cwiseQuotient(mass_.diagonal());
  return mass_solver_.solve(dual);
}

Eigen::VectorXd SpaceMesh::trace(const Eigen::VectorXd& nodal) const
{
  Eigen::VectorXd out(n_boundary());
  for (Eigen::Index s = 0; s < n_boundary(); ++s)
    out(s) = nodal(boundary_[s]);
  return out;
}

Eigen::VectorXd SpaceMesh::boundary_load(const Eigen::VectorXd& boundary_values) const
{
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n_nodes());
  for (Eigen::Index s = 0; s < n_boundary(); ++s)
    load(boundary_[s]) = boundary_weights_(s) * boundary_values(s);
  return load;
}

bool Potential::project()
{
  bool moved = false;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double clamped = std::clamp(values(i), lower, upper);
    moved = moved || clamped != values(i);
    values(i) = clamped;
  }
  return moved;
}

bool Potential::within_bounds() const
{
  return (values.array() >= lower).all() && (values.array() <= upper).all();
}

BoundaryData BoundaryData::zeros(const SpaceMesh& mesh, const TimeGrid& grid, BoundaryKind kind)
{
  return {Eigen::MatrixXd::Zero(mesh.n_boundary(), grid.n_nodes()), kind};
}

BoundaryData trace_of(const Field& field, const SpaceMesh& mesh)
{
  BoundaryData out{Eigen::MatrixXd(mesh.n_boundary(), field.n_time()), BoundaryKind::Dirichlet};
  for (Eigen::Index s = 0; s < mesh.n_boundary(); ++s)
    out.values.row(s) = field.values().row(mesh.boundary_idx()[s]);
  return out;
}

double boundary_l2_inner(const BoundaryData& f, const BoundaryData& g,
                         const SpaceMesh& mesh, const TimeGrid& grid)
{
  if (f.values.rows() != mesh.n_boundary() || g.values.rows() != mesh.n_boundary() ||
      f.values.cols() != grid.n_nodes() || g.values.cols() != grid.n_nodes())
    throw std::invalid_argument("boundary data shape mismatch");
  double sum = 0.0;
  for (int n = 0; n <= grid.n_steps; ++n) {
    const double spatial =
      (f.values.col(n).cwiseProduct(g.values.col(n))).dot(mesh.boundary_weights());
    sum += grid.trapezoid_weight(n) * spatial;
  }
  return sum;
}

double space_time_inner(const Field& f, const Field& g, const SpaceMesh& mesh,
                        const TimeGrid& grid)
{
  if (f.n_space() != mesh.n_nodes() || g.n_space() != mesh.n_nodes() ||
      f.n_time() != grid.n_nodes() || g.n_time() != grid.n_nodes())
    throw std::invalid_argument("field shape mismatch");
  double sum = 0.0;
  for (int n = 0; n <= grid.n_steps; ++n)
    sum += grid.trapezoid_weight(n) * mesh.mass_inner(f.at_step(n), g.at_step(n));
  return sum;
}

} // namespace fracinv
