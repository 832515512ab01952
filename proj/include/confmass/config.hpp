#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confmass/geometry.hpp"
#include "confmass/potential.hpp"
#include "json.hpp"

namespace confmass {

/// branch: Liouville center-value continuation, or the Henon p-sweep.
/// solve: one solve per sweep value (or a single solve).
/// certificate: map, transport and certificate only.
enum class RunMode { Branch, Solve, Certificate };
enum class ProblemKind { Liouville, Henon, System, General };

std::string_view to_string(RunMode mode) noexcept;
std::string_view to_string(ProblemKind kind) noexcept;

struct GridConfig {
  int n_r = 256;
  int n_theta = 64;
  double grading = 1.0;
};

struct SweepConfig {
  std::string parameter;  ///< "s", "p", "lambda", "epsilon" or empty
  std::vector<double> values;
};

struct Tolerances {
  double newton = 1e-10;
  int max_iter = 50;
  double grid_allowance = 1e-3;
};

struct NonlinearityConfig {
  std::string kind = "exp_power";  ///< exp_power | exponential | linear
  double lambda = 1.0;
  double p = 1.5;
};

struct ExperimentConfig {
  std::string name = "custom";
  RunMode mode = RunMode::Solve;
  std::vector<DomainShape> domains{UnitDisk{}};
  ProblemKind problem = ProblemKind::Liouville;
  std::vector<double> alphas{0.0};  ///< one run per entry
  double lambda = 1.0;
  double p = 2.0;
  AnalyticField k = ConstantField{};
  Eigen::MatrixXd coupling;  ///< system only
  std::vector<double> system_lambdas;
  std::vector<double> system_alphas;
  std::vector<AnalyticField> system_ks;
  NonlinearityConfig nonlinearity;
  double guess_amplitude = 0.0;  ///< initial guess c (1 - r^2); 0 means zero
  GridConfig grid;
  int map_nodes = 512;
  PotentialGridSpec potential_grid;
  SweepConfig sweep;
  Tolerances tolerances;
  int max_bisections = 4;
  bool allow_extreme_alpha = false;
  std::string output_dir = "confmass_out";
  std::uint64_t seed = 0;
};

/// Strict parser: unknown keys, wrong types and invalid values raise
/// ConfigError before any computation.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

nlohmann::json domain_to_json(const DomainShape& shape);
DomainShape domain_from_json(const nlohmann::json& doc);
nlohmann::json field_to_json(const AnalyticField& field);
AnalyticField field_from_json(const nlohmann::json& doc);

/// Checks the invariants of an already built config (positive tolerances,
/// non-degenerate sweeps, sizes) and throws ConfigError.
void validate_config(const ExperimentConfig& config);

}  // namespace confmass
