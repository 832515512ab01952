#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "confmass/report.hpp"
#include "test_support.hpp"

using namespace confmass;
using testing::code_of;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("confmass_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("empty report gives a header-only CSV") {
  const fs::path dir = scratch_dir("empty");
  ExperimentReport r;
  r.name = "empty";
  const std::string path = emit_report(r, ReportFormat::Csv, dir.string());
  CHECK(slurp(path) == std::string(kReportCsvHeader) + "\n");
  fs::remove_all(dir);
}

TEST_CASE("report CSV columns and JSON round trip") {
  const fs::path dir = scratch_dir("records");
  ExperimentReport r;
  r.name = "records";
  r.records.push_back({"a", 1.0, 2.0, 3.0, 4.0, 1e-5, 0.0, 25.0, true});
  r.records.push_back({"b", std::nan(""), 0.5, std::nan(""), std::nan(""), std::nan(""), std::nan(""), 30.0, false});
  const std::string body = slurp(emit_report(r, ReportFormat::Csv, dir.string()));
  CHECK(std::count(body.begin(), body.end(), '\n') == 3);
  CHECK(body.rfind(kReportCsvHeader, 0) == 0);
  CHECK(body.find(",true\n") != std::string::npos);
  CHECK(body.find(",false\n") != std::string::npos);

  emit_report(r, ReportFormat::Json, dir.string());
  const ExperimentReport back = load_report((dir / "report.json").string());
  REQUIRE(back.records.size() == 2);
  CHECK(back.records[0].mass == 3.0);
  CHECK(std::isnan(back.records[1].mass));
  CHECK_FALSE(back.all_pass());
  CHECK(code_of([] { parse_format("xml"); }) == ErrorCode::InvalidParameter);
  CHECK(parse_format("csv") == ReportFormat::Csv);
  fs::remove_all(dir);
}

TEST_CASE("pass policy") {
  CHECK(within_certificate(8.0, 8.0, 1e-3));
  CHECK(within_certificate(8.007, 8.0, 1e-3));
  CHECK_FALSE(within_certificate(8.009, 8.0, 1e-3));
  ExperimentReport r;
  r.records.push_back({"a", 0, 0, 1, 0, 0, 0, 2, true});
  CHECK(r.all_pass());
  r.partial = true;
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("Toda experiment report schema") {
  ExperimentConfig c = builtin_config("E6");
  const fs::path dir = scratch_dir("e6");
  c.output_dir = dir.string();
  c.grid = {64, 32, 1.0};
  const ExperimentReport r = run_experiment(c);
  CHECK(r.all_pass());
  const auto doc = nlohmann::json::parse(slurp(dir / "report.json"));
  for (const char* key : {"name", "config", "records", "details", "environment", "timings", "partial", "all_pass"})
    CHECK(doc.contains(key));
  const auto& run = doc["details"]["runs"][0];
  REQUIRE(run.contains("pohozaev"));
  CHECK(run["pohozaev"]["masses"].size() == 2);
  CHECK(run["pohozaev"]["lhs"].get<double>() > 0.0);
  CHECK(run["certificate"]["theorem"] == "system");
  for (const char* key : {"theorem", "ingredients", "rho0", "derivation", "observed_masses", "satisfied"})
    CHECK(run["certificate"].contains(key));
  for (const auto& rec : doc["records"]) {
    CHECK(rec["mass"].get<double>() <= 24 * std::sqrt(2.0) * kPi);
    CHECK(rec["pass"] == true);
  }
  fs::remove_all(dir);
}

TEST_CASE("two runs with the same seed write identical CSVs") {
  ExperimentConfig c = builtin_config("E7");
  c.grid = {64, 32, 1.0};
  const fs::path a = scratch_dir("repro_a"), b = scratch_dir("repro_b");
  c.output_dir = a.string();
  run_experiment(c);
  c.output_dir = b.string();
  run_experiment(c);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    CAPTURE(entry.path().filename().string());
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    ++compared;
  }
  CHECK(compared >= 3);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("invalid config fails before any compute") {
  ExperimentConfig c = builtin_config("E7");
  const fs::path dir = scratch_dir("invalid");
  c.output_dir = dir.string();
  c.tolerances.newton = -1e-10;
  CHECK(code_of([&] { run_experiment(c); }) == ErrorCode::ConfigError);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("failing run persists a partial report") {
  ExperimentConfig c = builtin_config("E7");
  c.grid = {32, 16, 1.0};
  c.problem = ProblemKind::Liouville;
  c.lambda = 3.0;  // beyond the fold: no solution
  c.tolerances.max_iter = 8;
  const fs::path dir = scratch_dir("partial");
  c.output_dir = dir.string();
  try {
    run_experiment(c);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NewtonDiverged);
    CHECK(std::string(e.what()).find("E7") != std::string::npos);
  }
  const ExperimentReport r = load_report((dir / "report.json").string());
  CHECK(r.partial);
  CHECK_FALSE(r.error.empty());
  CHECK_FALSE(r.all_pass());
  fs::remove_all(dir);
}
