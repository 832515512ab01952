#pragma once

#include <string>
#include <vector>

#include "confmass/experiment.hpp"

namespace confmass {

enum class ReportFormat { Json, Csv };

ReportFormat parse_format(const std::string& name);

inline constexpr const char* kReportCsvHeader = "s,lambda,mass,sup_norm,residual,holder_gap,rho0,pass";

/// Writes report.json or report.csv into dir and returns the file path.
std::string emit_report(const ExperimentReport& report, ReportFormat format, const std::string& dir);

nlohmann::json to_json(const ExperimentReport& report);
/// Reads back a report.json written by emit_report.
ExperimentReport load_report(const std::string& path);

/// Build and runtime facts recorded with every report.
nlohmann::json environment_metadata();

}  // namespace confmass
