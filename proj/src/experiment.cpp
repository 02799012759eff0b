#include "fracinv/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "fracinv/expression.hpp"

namespace fracinv {

namespace {

using nlohmann::json;

constexpr double kDiskRadiusSquared = 0.03;
constexpr double kDiamondRadius = 0.3;
constexpr double kInclusionContrast = 2.0;

template <typename T>
void read(const json& j, const char* key, T& out)
{
  if (!j.contains(key))
    return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

// Numbers are accepted where expressions are expected ("q0": 1).
void read_expression(const json& j, const char* key, std::string& out)
{
  if (!j.contains(key))
    return;
  const json& v = j.at(key);
  if (v.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << v.get<double>();
    out = os.str();
  } else if (v.is_string()) {
    out = v.get<std::string>();
  } else {
    throw ConfigError(std::string("config key '") + key + "' must be a string or number");
  }
}

double target_value(const std::string& name, double x, double y)
{
  using std::numbers::pi;
  if (name == "linear")
    return x;
  if (name == "exp-cos")
    return std::exp(-2.0 * x) * std::cos(2.0 * pi * x);
  if (name == "pi2-sin")
    return pi * pi * std::sin(pi * x);
  if (name == "hat")
    return x < 1.0 ? x : 2.0 - x;
  if (name == "piecewise")
    return (x >= 0.45 && x < 1.5) ? 1.0 : 2.0;
  if (name == "disk2d") {
    const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
    return 1.0 + (r2 <= kDiskRadiusSquared ? kInclusionContrast : 0.0);
  }
  if (name == "diamond2d") {
    const double r = std::abs(x - 0.5) + std::abs(y - 0.5);
    return 1.0 + (r < kDiamondRadius ? kInclusionContrast : 0.0);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool is_named_target(const std::string& name)
{
  static const std::set<std::string> names = {"linear", "hat",    "exp-cos",  "pi2-sin",
                                              "piecewise", "disk2d", "diamond2d"};
  return names.count(name) > 0;
}

} // namespace

void ExperimentConfig::validate() const
{
  auto require = [](bool ok, const std::string& what) {
    if (!ok)
      throw ConfigError(what);
  };
  require(dim == 1 || dim == 2, "dim must be 1 or 2");
  require(domain_a < domain_b, "domain must satisfy a < b");
  require(dim == 1 || (domain_a == 0.0 && domain_b == 1.0), "2D domain is the unit square");
  require(n_cells >= 2, "n_cells must be >= 2");
  require(n_steps >= 2, "n_steps must be >= 2");
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
  require(final_time > 0.0, "T must be positive");
  require(rho >= 0.0 && mu >= 0.0, "rho and mu must be non-negative");
  require(epsilon >= 0.0, "epsilon must be non-negative");
  require(tol >= 0.0, "tol must be non-negative");
  require(max_it >= 0, "max_it must be non-negative");
  require(lower > 0.0 && upper >= lower, "bounds must satisfy 0 < lower <= upper");
  require(data_grid_refinement >= 1, "data_grid_refinement must be >= 1");
  try {
    if (!is_named_target(q_true))
      Expression{q_true};
    Expression{neumann_expr};
    Expression{q0};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  require(dim == 2 || (q_true != "disk2d" && q_true != "diamond2d"),
          "2D targets need dim = 2");
}

ExperimentConfig config_from_json(const json& j)
{
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
    "dim", "domain", "n_cells", "n_steps", "alpha", "T", "rho", "mu", "epsilon", "seed",
    "q_true", "neumann_expr", "q0", "tol", "max_it", "lower", "upper", "data_grid_refinement"};
  for (const auto& item : j.items())
    if (!known.count(item.key()))
      throw ConfigError("unknown config key '" + item.key() + "'");

  ExperimentConfig c;
  read(j, "dim", c.dim);
  if (c.dim == 2) {
    c.domain_a = 0.0;
    c.domain_b = 1.0;
  }
  if (j.contains("domain")) {
    const json& d = j.at("domain");
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
      throw ConfigError("domain must be [a, b]");
    c.domain_a = d[0].get<double>();
    c.domain_b = d[1].get<double>();
  }
  read(j, "n_cells", c.n_cells);
  read(j, "n_steps", c.n_steps);
  read(j, "alpha", c.alpha);
  read(j, "T", c.final_time);
  read(j, "rho", c.rho);
  read(j, "mu", c.mu);
  read(j, "epsilon", c.epsilon);
  read(j, "seed", c.seed);
  read(j, "q_true", c.q_true);
  read_expression(j, "neumann_expr", c.neumann_expr);
  read_expression(j, "q0", c.q0);
  read(j, "tol", c.tol);
  read(j, "max_it", c.max_it);
  read(j, "lower", c.lower);
  read(j, "upper", c.upper);
  read(j, "data_grid_refinement", c.data_grid_refinement);
  c.validate();
  return c;
}

json to_json(const ExperimentConfig& c)
{
  return json{{"dim", c.dim},
              {"domain", {c.domain_a, c.domain_b}},
              {"n_cells", c.n_cells},
              {"n_steps", c.n_steps},
              {"alpha", c.alpha},
              {"T", c.final_time},
              {"rho", c.rho},
              {"mu", c.mu},
              {"epsilon", c.epsilon},
              {"seed", c.seed},
              {"q_true", c.q_true},
              {"neumann_expr", c.neumann_expr},
              {"q0", c.q0},
              {"tol", c.tol},
              {"max_it", c.max_it},
              {"lower", c.lower},
              {"upper", c.upper},
              {"data_grid_refinement", c.data_grid_refinement}};
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

SpaceMesh build_mesh(const ExperimentConfig& c, int refinement)
{
  if (c.dim == 1)
    return build_interval_mesh(c.domain_a, c.domain_b, c.n_cells * refinement);
  return build_square_mesh(c.n_cells * refinement, c.n_cells * refinement);
}

TimeGrid build_grid(const ExperimentConfig& c, int refinement)
{
  return build_time_grid(c.final_time, c.n_steps * refinement, c.alpha);
}

Potential make_target(const std::string& name, const SpaceMesh& mesh, double lower,
                      double upper)
{
  Potential q{Eigen::VectorXd(mesh.n_nodes()), lower, upper};
  if (is_named_target(name)) {
    for (Eigen::Index i = 0; i < mesh.n_nodes(); ++i)
      q.values(i) = target_value(name, mesh.x(i), mesh.y(i));
    return q;
  }
  const Expression expr(name);
  for (Eigen::Index i = 0; i < mesh.n_nodes(); ++i)
    q.values(i) = expr({mesh.x(i), mesh.y(i), 0.0, 0.0});
  return q;
}

BoundaryData make_excitation(const std::string& expression, const SpaceMesh& mesh,
                             const TimeGrid& grid)
{
  const Expression expr(expression);
  BoundaryData out = BoundaryData::zeros(mesh, grid, BoundaryKind::Neumann);
  for (Eigen::Index s = 0; s < mesh.n_boundary(); ++s) {
    const int node = mesh.boundary_idx()[s];
    for (int n = 0; n <= grid.n_steps; ++n)
      out.values(s, n) = expr({mesh.x(node), mesh.y(node), grid.time(n), grid.alpha});
  }
  return out;
}

CauchyData generate_observation(const ExperimentConfig& config)
{
  const int r = config.data_grid_refinement;
  const SpaceMesh mesh = build_mesh(config);
  const TimeGrid grid = build_grid(config);
  const SpaceMesh fine_mesh = build_mesh(config, r);
  const TimeGrid fine_grid = build_grid(config, r);

  // The target is evaluated on the data grid without projection: data come
  // from the true coefficient even where it leaves the admissible box.
  const Potential q_true = make_target(config.q_true, fine_mesh, -1e300, 1e300);
  const Field state = solve_neumann(q_true, make_excitation(config.neumann_expr, fine_mesh, fine_grid),
                                    nullptr, fine_mesh, fine_grid);

  CauchyData data;
  data.flux = make_excitation(config.neumann_expr, mesh, grid);
  data.observed = BoundaryData::zeros(mesh, grid, BoundaryKind::Dirichlet);
  // Working boundary nodes are every r-th fine boundary node along each edge;
  // locate them by coordinates.
  for (Eigen::Index s = 0; s < mesh.n_boundary(); ++s) {
    const int node = mesh.boundary_idx()[s];
    int fine_node = -1;
    if (mesh.dim() == 1) {
      fine_node = node == 0 ? 0 : static_cast<int>(fine_mesh.n_nodes()) - 1;
    } else {
      const int px = mesh.n_cells_x() + 1, fine_px = fine_mesh.n_cells_x() + 1;
      fine_node = (node % px) * r + (node / px) * r * fine_px;
    }
    for (int n = 0; n <= grid.n_steps; ++n)
      data.observed.values(s, n) = state(fine_node, n * r);
  }
  return data;
}

BoundaryData add_noise(const BoundaryData& phi, double epsilon, std::uint64_t seed)
{
  if (!(epsilon >= 0.0))
    throw std::invalid_argument("noise level must be non-negative");
  BoundaryData out = phi;
  if (epsilon == 0.0)
    return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (Eigen::Index s = 0; s < out.values.rows(); ++s)
    for (Eigen::Index n = 0; n < out.values.cols(); ++n)
      out.values(s, n) += epsilon * (2.0 * uniform(rng) - 1.0);
  return out;
}

double relative_error(const Eigen::VectorXd& q, const Eigen::VectorXd& q_true,
                      const SpaceMesh& mesh)
{
  const double norm = mesh.l2_norm(q_true);
  if (!(norm > 0.0))
    throw std::invalid_argument("relative error undefined for a zero target");
  return mesh.l2_norm(q - q_true) / norm;
}

std::string to_string(ObjectiveKind kind)
{
  return kind == ObjectiveKind::KohnVogelius ? "kv" : "ls";
}

ObjectiveKind parse_method(const std::string& name)
{
  if (name == "kv")
    return ObjectiveKind::KohnVogelius;
  if (name == "ls")
    return ObjectiveKind::LeastSquares;
  throw ConfigError("unknown method '" + name + "' (expected kv or ls)");
}

ReconstructionReport run_experiment(const ExperimentConfig& config, ObjectiveKind method,
                                    const std::function<void(const CgIterate&)>& observer)
{
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  ReconstructionReport report;
  report.config = config;
  report.method = method;
  const SpaceMesh mesh = build_mesh(config);
  const TimeGrid grid = build_grid(config);
  report.coords = mesh.coords();
  report.q_true = make_target(config.q_true, mesh).values;

  report.data = generate_observation(config);
  report.data.observed = add_noise(report.data.observed, config.epsilon, config.seed);

  Potential q0 = make_target(config.q0, mesh, config.lower, config.upper);
  q0.project();

  ReconstructionProblem problem{method, report.data,
                                method == ObjectiveKind::KohnVogelius ? config.rho : config.mu};
  CgOptions options;
  options.tol = config.tol;
  options.max_it = config.max_it;
  const Eigen::VectorXd& q_true = report.q_true;
  report.result = run_cgm(problem, q0, mesh, grid, options,
                          [&](const Eigen::VectorXd& q) { return relative_error(q, q_true, mesh); },
                          observer);
  report.wall_time =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SweepParameter parse_sweep_parameter(const std::string& name)
{
  if (name == "rho")
    return SweepParameter::Rho;
  if (name == "alpha")
    return SweepParameter::Alpha;
  if (name == "epsilon")
    return SweepParameter::Epsilon;
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

std::string to_string(SweepParameter p)
{
  switch (p) {
    case SweepParameter::Rho: return "rho";
    case SweepParameter::Alpha: return "alpha";
    case SweepParameter::Epsilon: return "epsilon";
  }
  return "unknown";
}

std::vector<ReconstructionReport> sweep(const ExperimentConfig& config, SweepParameter parameter,
                                        const std::vector<double>& values, ObjectiveKind method)
{
  std::vector<ReconstructionReport> reports;
  reports.reserve(values.size());
  for (double value : values) {
    ExperimentConfig member = config;
    switch (parameter) {
      case SweepParameter::Rho:
        (method == ObjectiveKind::KohnVogelius ? member.rho : member.mu) = value;
        break;
      case SweepParameter::Alpha: member.alpha = value; break;
      case SweepParameter::Epsilon: member.epsilon = value; break;
    }
    try {
      reports.push_back(run_experiment(member, method));
    } catch (const std::exception& e) {
      ReconstructionReport failed;
      failed.config = member;
      failed.method = method;
      failed.error = e.what();
      failed.result.status = CgStatus::SolverFailure;
      failed.result.message = e.what();
      reports.push_back(std::move(failed));
    }
  }
  return reports;
}

std::string format_double(double value)
{
  if (std::isnan(value))
    return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

nlohmann::json report_to_json(const ReconstructionReport& report, bool include_wall_time)
{
  const CgHistory& h = report.result.history;
  json history = json::array();
  for (std::size_t n = 0; n < h.k_rho.size(); ++n)
    history.push_back({{"iter", n},
                       {"k_rho", h.k_rho[n]},
                       {"grad_norm", h.grad_norm[n]},
                       {"beta", h.beta[n]},
                       {"gamma", h.gamma[n]},
                       {"rel_error", h.rel_error[n]},
                       {"step", to_string(h.branch[n])}});
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  json j{{"config", to_json(report.config)},
         {"method", to_string(report.method)},
         {"status", to_string(report.result.status)},
         {"message", report.result.message},
         {"iterations", report.result.iterations},
         {"history", history},
         {"q_true", vec(report.q_true)},
         {"q_final", vec(report.result.q.values)}};
  if (!report.error.empty())
    j["error"] = report.error;
  if (!h.rel_error.empty()) {
    j["initial_error"] = report.initial_error();
    j["final_error"] = report.final_error();
  }
  if (include_wall_time)
    j["wall_time"] = report.wall_time;
  return j;
}

void write_report(const ReconstructionReport& report, const std::filesystem::path& dir)
{
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    out << report_to_json(report).dump(2) << '\n';
  }
  const CgHistory& h = report.result.history;
  {
    std::ofstream out(dir / "history.csv");
    out << "iter,k_rho,grad_norm,beta,gamma,rel_error\n";
    for (std::size_t n = 0; n < h.k_rho.size(); ++n)
      out << n << ',' << format_double(h.k_rho[n]) << ',' << format_double(h.grad_norm[n])
          << ',' << format_double(h.beta[n]) << ',' << format_double(h.gamma[n]) << ','
          << format_double(h.rel_error[n]) << '\n';
  }
  const bool two_d = report.coords.cols() == 2;
  {
    std::ofstream out(dir / "potential.csv");
    out << (two_d ? "x,y,q_true,q_final\n" : "x,q_true,q_final\n");
    for (Eigen::Index i = 0; i < report.coords.rows(); ++i) {
      out << format_double(report.coords(i, 0)) << ',';
      if (two_d)
        out << format_double(report.coords(i, 1)) << ',';
      out << format_double(report.q_true(i)) << ',' << format_double(report.result.q.values(i))
          << '\n';
    }
  }
  {
    const SpaceMesh mesh = build_mesh(report.config);
    const TimeGrid grid = build_grid(report.config);
    std::ofstream out(dir / "boundary.csv");
    out << (two_d ? "node,x,y,t,flux,observed\n" : "node,x,t,flux,observed\n");
    const auto& flux = report.data.flux.values;
    const auto& observed = report.data.observed.values;
    for (Eigen::Index s = 0; s < observed.rows(); ++s) {
      const int node = mesh.boundary_idx()[s];
      for (Eigen::Index n = 0; n < observed.cols(); ++n) {
        out << node << ',' << format_double(mesh.x(node)) << ',';
        if (two_d)
          out << format_double(mesh.y(node)) << ',';
        out << format_double(grid.time(static_cast<int>(n))) << ','
            << format_double(flux(s, n)) << ',' << format_double(observed(s, n)) << '\n';
      }
    }
  }
}

} // namespace fracinv
