#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "confmass/config.hpp"
#include "json.hpp"

namespace confmass {

/// One pass/fail row of an experiment. Quantities that do not apply to a
/// record (e.g. mass in a certificate-only run) are NaN.
struct RunRecord {
  std::string label;
  double s = 0.0;          ///< center value
  double parameter = 0.0;  ///< lambda, p or epsilon
  double mass = 0.0;
  double sup_norm = 0.0;
  double residual = 0.0;  ///< relative identity residual
  double holder_gap = 0.0;
  double rho0 = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string name;
  nlohmann::json config;
  std::vector<RunRecord> records;
  nlohmann::json details = nlohmann::json::object();
  nlohmann::json environment = nlohmann::json::object();
  std::map<std::string, double> timings;
  bool partial = false;
  std::string error;

  bool all_pass() const;
};

std::vector<std::string> builtin_names();
/// Builtin experiments E1..E7; throws ConfigError for other names.
ExperimentConfig builtin_config(std::string_view name);

/// Full pipeline map -> transport -> solve -> identity -> certificate.
/// When write_files is set the report, branch CSVs and plot data are written
/// under config.output_dir. On failure a partial report is written and the
/// error is rethrown with the run label prepended.
ExperimentReport run_experiment(const ExperimentConfig& config, bool write_files = true);

/// Pass policy shared by every record: mass <= rho0 (1 + allowance).
bool within_certificate(double mass, double rho0, double allowance);

}  // namespace confmass
