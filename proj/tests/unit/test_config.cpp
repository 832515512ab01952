#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "confmass/config.hpp"
#include "confmass/experiment.hpp"
#include "test_support.hpp"

using namespace confmass;
using testing::code_of;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "mode": "solve",
    "domain": {"kind": "unit_disk"},
    "problem": {"type": "liouville", "lambda": 1.0, "alpha": 0.0}
  })");
}

ErrorCode parse_code(const json& doc) {
  return code_of([&] { parse_config(doc); });
}

}  // namespace

TEST_CASE("builtin configs round-trip through JSON") {
  for (const std::string& name : builtin_names()) {
    CAPTURE(name);
    const ExperimentConfig c = builtin_config(name);
    const json j = to_json(c);
    CHECK(to_json(parse_config(j)) == j);
    CHECK(c.name == name);
  }
  CHECK(builtin_names().size() == 7);
  CHECK(code_of([] { builtin_config("E8"); }) == ErrorCode::ConfigError);
}

TEST_CASE("defaults") {
  const ExperimentConfig c = parse_config(minimal());
  CHECK(c.mode == RunMode::Solve);
  CHECK(c.grid.n_r == 256);
  CHECK(c.grid.n_theta == 64);
  CHECK(c.tolerances.newton == 1e-10);
  CHECK(c.tolerances.grid_allowance == 1e-3);
  CHECK(c.domains.size() == 1);
  CHECK(std::holds_alternative<UnitDisk>(c.domains[0]));
}

TEST_CASE("domains and fields round-trip") {
  const std::vector<DomainShape> shapes{UnitDisk{}, Ellipse{1.5, 0.8}, FourierBlob{{1.0, 0.1}, {0.0, 0.05}},
                                        Dumbbell{0.25}};
  for (const DomainShape& s : shapes) CHECK(domain_to_json(domain_from_json(domain_to_json(s))) == domain_to_json(s));
  const std::vector<AnalyticField> fields{ConstantField{2.0}, AffineField{1.0, 0.25, 0.1},
                                          GaussianBumpField{Point(0.1, -0.2), 0.3, 0.5}};
  for (const AnalyticField& f : fields) CHECK(field_to_json(field_from_json(field_to_json(f))) == field_to_json(f));
  CHECK(code_of([] { domain_from_json(json{{"kind", "triangle"}}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { domain_from_json(json{{"kind", "ellipse"}, {"params", {{"a", 1.0}}}}); }) == ErrorCode::ConfigError);
  CHECK(code_of([] { field_from_json(json{{"kind", "gaussian_bump"}, {"sigma", -1.0}}); }) == ErrorCode::ConfigError);
}

TEST_CASE("strict parsing") {
  json doc = minimal();
  doc["colour"] = "blue";
  CHECK(parse_code(doc) == ErrorCode::ConfigError);

  doc = minimal();
  doc["tolerances"] = {{"newton", -1e-10}};
  CHECK(parse_code(doc) == ErrorCode::ConfigError);

  doc = minimal();
  doc["tolerances"] = {{"newton", "small"}};
  CHECK(parse_code(doc) == ErrorCode::ConfigError);

  doc = minimal();
  doc["grid"] = {{"n_r", 256}, {"n_theta", 63}};
  CHECK(parse_code(doc) == ErrorCode::ConfigError);

  doc = minimal();
  doc["problem"]["alpha"] = -1.0;
  CHECK(parse_code(doc) == ErrorCode::ConfigError);

  doc = minimal();
  doc["mode"] = "explore";
  CHECK(parse_code(doc) == ErrorCode::ConfigError);

  doc = minimal();
  doc.erase("problem");
  CHECK(parse_code(doc) == ErrorCode::ConfigError);

  doc = minimal();
  doc["seed"] = -4;
  CHECK(parse_code(doc) == ErrorCode::ConfigError);
}

TEST_CASE("sweep rules per mode") {
  json doc = minimal();
  doc["sweep"] = {{"parameter", "lambda"}, {"values", {0.5, 1.0}}};
  CHECK_NOTHROW(parse_config(doc));

  doc["sweep"] = {{"parameter", "s"}, {"values", {0.5, 1.0}}};
  CHECK(parse_code(doc) == ErrorCode::ConfigError);

  doc["mode"] = "branch";
  CHECK_NOTHROW(parse_config(doc));

  doc["sweep"] = {{"parameter", "s"}, {"min", 1.0}, {"max", 1.0}, {"steps", 10}};
  CHECK(parse_code(doc) == ErrorCode::ConfigError);

  doc["sweep"] = {{"parameter", "s"}, {"min", 0.1}, {"max", 1.0}, {"steps", 10}};
  CHECK(parse_config(doc).sweep.values.size() == 10);

  doc["sweep"] = {{"parameter", "s"}, {"values", {0.5, 0.5}}};
  CHECK(parse_code(doc) == ErrorCode::ConfigError);

  doc = minimal();
  doc["mode"] = "certificate";
  doc["sweep"] = {{"parameter", "epsilon"}, {"values", {0.5, 0.25}}};
  CHECK(parse_code(doc) == ErrorCode::ConfigError);
  doc["domain"] = {{"kind", "dumbbell"}, {"params", {{"neck_width", 0.5}}}};
  CHECK_NOTHROW(parse_config(doc));
  doc["sweep"]["values"] = {0.5, 1.5};
  CHECK(parse_code(doc) == ErrorCode::ConfigError);
}

TEST_CASE("validate_config on built configs") {
  ExperimentConfig c = builtin_config("E1");
  CHECK_NOTHROW(validate_config(c));
  c.tolerances.newton = 0.0;
  CHECK(code_of([&] { validate_config(c); }) == ErrorCode::ConfigError);
  c = builtin_config("E1");
  c.map_nodes = 63;
  CHECK(code_of([&] { validate_config(c); }) == ErrorCode::ConfigError);
}

TEST_CASE("loading from disk") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto good = (dir / "confmass_config_ok.json").string();
  const auto broken = (dir / "confmass_config_broken.json").string();
  std::ofstream(good) << minimal().dump(2);
  std::ofstream(broken) << "{ \"mode\": ";
  CHECK(load_config(good).mode == RunMode::Solve);
  CHECK(code_of([&] { load_config(broken); }) == ErrorCode::ConfigError);
  CHECK(code_of([&] { load_config((dir / "confmass_missing.json").string()); }) == ErrorCode::IOError);
  std::filesystem::remove(good);
  std::filesystem::remove(broken);
}
