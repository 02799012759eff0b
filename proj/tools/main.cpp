#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fracinv/experiment.hpp"
#include "fracinv/forward_solver.hpp"

namespace {

using namespace fracinv;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void write_field(const std::filesystem::path& path, const Field& field, const SpaceMesh& mesh,
                 const TimeGrid& grid)
{
  std::ofstream out(path);
  const bool two_d = mesh.dim() == 2;
  out << (two_d ? "node,x,y,t,u\n" : "node,x,t,u\n");
  for (Eigen::Index i = 0; i < mesh.n_nodes(); ++i)
    for (int n = 0; n <= grid.n_steps; ++n) {
      out << i << ',' << format_double(mesh.x(i)) << ',';
      if (two_d)
        out << format_double(mesh.y(i)) << ',';
      out << format_double(grid.time(n)) << ',' << format_double(field(i, n)) << '\n';
    }
}

void write_boundary(const std::filesystem::path& path, const CauchyData& data,
                    const SpaceMesh& mesh, const TimeGrid& grid)
{
  std::ofstream out(path);
  const bool two_d = mesh.dim() == 2;
  out << (two_d ? "node,x,y,t,flux,observed\n" : "node,x,t,flux,observed\n");
  for (Eigen::Index s = 0; s < mesh.n_boundary(); ++s) {
    const int node = mesh.boundary_idx()[s];
    for (int n = 0; n <= grid.n_steps; ++n) {
      out << node << ',' << format_double(mesh.x(node)) << ',';
      if (two_d)
        out << format_double(mesh.y(node)) << ',';
      out << format_double(grid.time(n)) << ',' << format_double(data.flux.values(s, n)) << ','
          << format_double(data.observed.values(s, n)) << '\n';
    }
  }
}

int cmd_forward(const ExperimentConfig& config, const std::filesystem::path& out)
{
  const SpaceMesh mesh = build_mesh(config);
  const TimeGrid grid = build_grid(config);
  const Potential q = make_target(config.q_true, mesh, -1e300, 1e300);
  CauchyData data;
  data.flux = make_excitation(config.neumann_expr, mesh, grid);
  const Field u_n = solve_neumann(q, data.flux, nullptr, mesh, grid);
  data.observed = trace_of(u_n, mesh);
  data.observed = add_noise(data.observed, config.epsilon, config.seed);
  const Field u_d = solve_dirichlet(q, data.observed, nullptr, mesh, grid);

  std::filesystem::create_directories(out);
  write_field(out / "field_neumann.csv", u_n, mesh, grid);
  write_field(out / "field_dirichlet.csv", u_d, mesh, grid);
  write_boundary(out / "boundary.csv", data, mesh, grid);
  return kExitOk;
}

bool numerical_failure(const ReconstructionReport& r)
{
  return !r.ok() || r.result.status == CgStatus::LineSearchFailure ||
         r.result.status == CgStatus::SolverFailure;
}

int cmd_invert(const ExperimentConfig& config, ObjectiveKind method,
               const std::filesystem::path& out)
{
  const ReconstructionReport report = run_experiment(config, method);
  write_report(report, out);
  std::cerr << "status: " << to_string(report.result.status) << " after "
            << report.result.iterations << " iterations, e = "
            << format_double(report.final_error()) << '\n';
  if (numerical_failure(report)) {
    std::cerr << "numerical failure: " << report.result.message << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

std::vector<double> parse_values(const std::string& csv)
{
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos)
        throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad sweep value '" + item + "'");
    }
  }
  if (values.empty())
    throw ConfigError("sweep needs at least one value");
  return values;
}

int cmd_sweep(const ExperimentConfig& config, ObjectiveKind method, const std::string& param,
              const std::string& values_csv, const std::filesystem::path& out)
{
  const SweepParameter parameter = parse_sweep_parameter(param);
  const std::vector<double> values = parse_values(values_csv);
  const auto reports = sweep(config, parameter, values, method);

  std::filesystem::create_directories(out);
  std::ofstream summary(out / "summary.csv");
  summary << to_string(parameter) << ",status,iterations,initial_error,final_error,final_k_rho\n";
  bool failed = false;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ReconstructionReport& r = reports[i];
    const std::string tag = to_string(parameter) + "_" + format_double(values[i]);
    if (r.ok())
      write_report(r, out / tag);
    else
      std::cerr << tag << ": " << r.error << '\n';
    failed = failed || numerical_failure(r);
    const auto& h = r.result.history;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    summary << format_double(values[i]) << ',' << to_string(r.result.status) << ','
            << r.result.iterations << ','
            << format_double(h.rel_error.empty() ? nan : h.rel_error.front()) << ','
            << format_double(h.rel_error.empty() ? nan : h.rel_error.back()) << ','
            << format_double(h.k_rho.empty() ? nan : h.k_rho.back()) << '\n';
  }
  return failed ? kExitNumerical : kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Potential reconstruction for time-fractional subdiffusion"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", method_name = "kv", param, values;
  std::uint64_t seed = 42;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "JSON experiment config")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed, "noise seed (overrides config)");
  };
  CLI::App* forward = app.add_subcommand("forward", "solve the forward problems");
  common(forward);
  CLI::App* invert = app.add_subcommand("invert", "reconstruct the potential");
  common(invert);
  invert->add_option("--method", method_name, "kv or ls");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  common(sweep_cmd);
  sweep_cmd->add_option("--method", method_name, "kv or ls");
  sweep_cmd->add_option("--param", param, "rho, alpha or epsilon")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    ExperimentConfig config = load_config(config_path);
    config.seed = seed;
    if (forward->parsed())
      return cmd_forward(config, out_dir);
    const ObjectiveKind method = parse_method(method_name);
    if (invert->parsed())
      return cmd_invert(config, method, out_dir);
    return cmd_sweep(config, method, param, values, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
