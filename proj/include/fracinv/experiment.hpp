#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracinv/optimizer.hpp"

namespace fracinv {

/// Thrown for malformed or out-of-range experiment configurations.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig
{
  int dim = 1;
  double domain_a = 0.0;  // 1D interval; 2D is always the unit square
  double domain_b = 2.0;
  int n_cells = 90;       // per axis
  int n_steps = 71;
  double alpha = 0.45;
  double final_time = 1.0;
  double rho = 1e-5;
  double mu = 1e-5;
  double epsilon = 0.0;
  std::uint64_t seed = 42;
  std::string q_true = "linear";
  std::string neumann_expr = "t^2";
  std::string q0 = "1";
  double tol = 1e-7;
  int max_it = 500;
  double lower = 1e-3;
  double upper = 10.0;
  int data_grid_refinement = 1;

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

SpaceMesh build_mesh(const ExperimentConfig& config, int refinement = 1);
TimeGrid build_grid(const ExperimentConfig& config, int refinement = 1);

/// Named targets: linear, exp-cos, pi2-sin, hat, piecewise, disk2d, diamond2d.
/// Anything else is parsed as an expression in x (and y).
Potential make_target(const std::string& name, const SpaceMesh& mesh, double lower = 1e-3,
                      double upper = 10.0);

/// Neumann excitation evaluated at the boundary nodes at every time node.
BoundaryData make_excitation(const std::string& expression, const SpaceMesh& mesh,
                             const TimeGrid& grid);

/// Noise-free Cauchy data on the working grid. The state is solved with q_true
/// on a grid refined data_grid_refinement times in space and time, and its
/// boundary trace is sampled at the working nodes.
CauchyData generate_observation(const ExperimentConfig& config);

/// phi + epsilon * (2u - 1), u ~ U[0,1) from a seeded generator.
BoundaryData add_noise(const BoundaryData& phi, double epsilon, std::uint64_t seed);

double relative_error(const Eigen::VectorXd& q, const Eigen::VectorXd& q_true,
                      const SpaceMesh& mesh);

struct ReconstructionReport
{
  ExperimentConfig config;
  ObjectiveKind method = ObjectiveKind::KohnVogelius;
  CgResult result;
  Eigen::VectorXd q_true;
  Eigen::MatrixXd coords;
  CauchyData data;  // as used by the inversion (noisy)
  double wall_time = 0.0;
  std::string error;  // set when the run threw before producing a result

  double initial_error() const { return result.history.rel_error.front(); }
  double final_error() const { return result.history.rel_error.back(); }
  bool ok() const { return error.empty(); }
};

ReconstructionReport run_experiment(const ExperimentConfig& config,
                                    ObjectiveKind method = ObjectiveKind::KohnVogelius,
                                    const std::function<void(const CgIterate&)>& observer = {});

enum class SweepParameter { Rho, Alpha, Epsilon };
SweepParameter parse_sweep_parameter(const std::string& name);
std::string to_string(SweepParameter p);

/// One run per value, all sharing the config seed. A failing member keeps its
/// slot with error set.
std::vector<ReconstructionReport> sweep(const ExperimentConfig& config, SweepParameter parameter,
                                        const std::vector<double>& values,
                                        ObjectiveKind method = ObjectiveKind::KohnVogelius);

std::string to_string(ObjectiveKind kind);
ObjectiveKind parse_method(const std::string& name);

nlohmann::json report_to_json(const ReconstructionReport& report, bool include_wall_time = true);

/// report.json, history.csv, potential.csv and boundary.csv in dir.
void write_report(const ReconstructionReport& report, const std::filesystem::path& dir);

/// Fixed 17-significant-digit formatting used by every CSV writer.
std::string format_double(double value);

} // namespace fracinv
