#include "confmass/report.hpp"

#include <Eigen/Core>
#include <filesystem>
#include <fstream>
#include <limits>

#include "confmass/csv.hpp"
#include "confmass/error.hpp"

namespace confmass {

using nlohmann::json;

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  fail(ErrorCode::InvalidParameter, "format must be json or csv, got '" + name + "'");
}

json environment_metadata() {
  json env;
#if defined(__clang__)
  env["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  env["compiler"] = std::string("gcc ") + __VERSION__;
#else
  env["compiler"] = "unknown";
#endif
  env["cplusplus"] = __cplusplus;
  env["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
#ifdef NDEBUG
  env["build"] = "release";
#else
  env["build"] = "debug";
#endif
  return env;
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double from_json_number(const json& j) {
  return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

json to_json(const ExperimentReport& report) {
  json records = json::array();
  for (const auto& r : report.records)
    records.push_back({{"label", r.label},
                       {"s", number_or_null(r.s)},
                       {"lambda", number_or_null(r.parameter)},
                       {"mass", number_or_null(r.mass)},
                       {"sup_norm", number_or_null(r.sup_norm)},
                       {"residual", number_or_null(r.residual)},
                       {"holder_gap", number_or_null(r.holder_gap)},
                       {"rho0", number_or_null(r.rho0)},
                       {"pass", r.pass}});
  json doc = {{"name", report.name},
              {"config", report.config},
              {"records", records},
              {"details", report.details},
              {"environment", report.environment},
              {"timings", report.timings},
              {"partial", report.partial},
              {"all_pass", report.all_pass()}};
  if (!report.error.empty()) doc["error"] = report.error;
  return doc;
}

std::string emit_report(const ExperimentReport& report, ReportFormat format, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::IOError, "cannot create " + dir + ": " + ec.message());
  if (format == ReportFormat::Json) {
    const std::string path = (std::filesystem::path(dir) / "report.json").string();
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IOError, "cannot write " + path);
    out << to_json(report).dump(2) << '\n';
    if (!out) fail(ErrorCode::IOError, "write failed for " + path);
    return path;
  }
  const std::string path = (std::filesystem::path(dir) / "report.csv").string();
  CsvWriter out(path, {"s", "lambda", "mass", "sup_norm", "residual", "holder_gap", "rho0", "pass"});
  for (const auto& r : report.records)
    out.row({format_number(r.s), format_number(r.parameter), format_number(r.mass), format_number(r.sup_norm),
             format_number(r.residual), format_number(r.holder_gap), format_number(r.rho0),
             r.pass ? "true" : "false"});
  return path;
}

ExperimentReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IOError, "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::IOError, std::string("report is not valid JSON: ") + e.what());
  }
  ExperimentReport r;
  r.name = doc.value("name", "");
  r.config = doc.value("config", json::object());
  r.details = doc.value("details", json::object());
  r.environment = doc.value("environment", json::object());
  r.partial = doc.value("partial", false);
  r.error = doc.value("error", "");
  if (doc.contains("timings"))
    for (const auto& [k, v] : doc["timings"].items()) r.timings[k] = v.get<double>();
  for (const auto& j : doc.value("records", json::array())) {
    RunRecord rec;
    rec.label = j.value("label", "");
    rec.s = from_json_number(j["s"]);
    rec.parameter = from_json_number(j["lambda"]);
    rec.mass = from_json_number(j["mass"]);
    rec.sup_norm = from_json_number(j["sup_norm"]);
    rec.residual = from_json_number(j["residual"]);
    rec.holder_gap = from_json_number(j["holder_gap"]);
    rec.rho0 = from_json_number(j["rho0"]);
    rec.pass = j.value("pass", false);
    r.records.push_back(std::move(rec));
  }
  return r;
}

}  // namespace confmass
