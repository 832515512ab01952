#include "confmass/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "confmass/error.hpp"

namespace confmass {

using nlohmann::json;

std::string_view to_string(RunMode mode) noexcept {
  switch (mode) {
    case RunMode::Branch: return "branch";
    case RunMode::Solve: return "solve";
    case RunMode::Certificate: return "certificate";
  }
  return "unknown";
}

std::string_view to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::Liouville: return "liouville";
    case ProblemKind::Henon: return "henon";
    case ProblemKind::System: return "system";
    case ProblemKind::General: return "general";
  }
  return "unknown";
}

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorCode::ConfigError, where + ": " + what);
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) bad(where, "unknown key '" + key + "'");
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad(where, "expected a finite number");
  return x;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where, "expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (j.is_number()) return {number(j, where)};
  if (!j.is_array() || j.empty()) bad(where, "expected a number or a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <class T>
std::vector<T> one_or_many(const json& j, const std::string& where, T (*parse)(const json&)) {
  std::vector<T> out;
  if (j.is_array()) {
    if (j.empty()) bad(where, "empty list");
    for (const auto& e : j) out.push_back(parse(e));
  } else {
    out.push_back(parse(j));
  }
  return out;
}

Point point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) bad(where, "expected [x, y]");
  return {number(j[0], where), number(j[1], where)};
}

}  // namespace

nlohmann::json domain_to_json(const DomainShape& shape) {
  struct Visitor {
    json operator()(const UnitDisk&) const { return {{"kind", "unit_disk"}, {"params", json::object()}}; }
    json operator()(const Ellipse& e) const { return {{"kind", "ellipse"}, {"params", {{"a", e.a}, {"b", e.b}}}}; }
    json operator()(const FourierBlob& f) const {
      return {{"kind", "fourier_blob"}, {"params", {{"cos", f.cos_coeffs}, {"sin", f.sin_coeffs}}}};
    }
    json operator()(const Dumbbell& d) const {
      return {{"kind", "dumbbell"}, {"params", {{"neck_width", d.neck_width}}}};
    }
  };
  return std::visit(Visitor{}, shape);
}

DomainShape domain_from_json(const json& doc) {
  const std::string where = "domain";
  check_keys(doc, {"kind", "params"}, where);
  if (!doc.contains("kind")) bad(where, "missing 'kind'");
  const std::string kind = text(doc["kind"], where + ".kind");
  const json params = doc.value("params", json::object());
  const std::string pw = where + ".params";
  if (kind == "unit_disk") {
    check_keys(params, {}, pw);
    return UnitDisk{};
  }
  if (kind == "ellipse") {
    check_keys(params, {"a", "b"}, pw);
    if (!params.contains("a") || !params.contains("b")) bad(pw, "ellipse needs a and b");
    return Ellipse{number(params["a"], pw + ".a"), number(params["b"], pw + ".b")};
  }
  if (kind == "fourier_blob") {
    check_keys(params, {"cos", "sin"}, pw);
    FourierBlob f;
    if (params.contains("cos")) f.cos_coeffs = numbers(params["cos"], pw + ".cos");
    if (params.contains("sin")) f.sin_coeffs = numbers(params["sin"], pw + ".sin");
    return f;
  }
  if (kind == "dumbbell") {
    check_keys(params, {"neck_width"}, pw);
    if (!params.contains("neck_width")) bad(pw, "dumbbell needs neck_width");
    return Dumbbell{number(params["neck_width"], pw + ".neck_width")};
  }
  bad(where, "unknown kind '" + kind + "'");
}

nlohmann::json field_to_json(const AnalyticField& field) {
  struct Visitor {
    json operator()(const ConstantField& c) const { return {{"kind", "constant"}, {"value", c.value}}; }
    json operator()(const AffineField& a) const {
      return {{"kind", "affine"}, {"c0", a.c0}, {"cx", a.cx}, {"cy", a.cy}};
    }
    json operator()(const GaussianBumpField& g) const {
      return {{"kind", "gaussian_bump"},
              {"center", {g.center.real(), g.center.imag()}},
              {"sigma", g.sigma},
              {"amplitude", g.amplitude}};
    }
  };
  return std::visit(Visitor{}, field);
}

AnalyticField field_from_json(const json& doc) {
  const std::string where = "field";
  require_object(doc, where);
  if (!doc.contains("kind")) bad(where, "missing 'kind'");
  const std::string kind = text(doc["kind"], where + ".kind");
  if (kind == "constant") {
    check_keys(doc, {"kind", "value"}, where);
    return ConstantField{doc.contains("value") ? number(doc["value"], where + ".value") : 1.0};
  }
  if (kind == "affine") {
    check_keys(doc, {"kind", "c0", "cx", "cy"}, where);
    AffineField a;
    if (doc.contains("c0")) a.c0 = number(doc["c0"], where + ".c0");
    if (doc.contains("cx")) a.cx = number(doc["cx"], where + ".cx");
    if (doc.contains("cy")) a.cy = number(doc["cy"], where + ".cy");
    return a;
  }
  if (kind == "gaussian_bump") {
    check_keys(doc, {"kind", "center", "sigma", "amplitude"}, where);
    GaussianBumpField g;
    if (doc.contains("center")) g.center = point(doc["center"], where + ".center");
    if (doc.contains("sigma")) g.sigma = number(doc["sigma"], where + ".sigma");
    if (doc.contains("amplitude")) g.amplitude = number(doc["amplitude"], where + ".amplitude");
    if (!(g.sigma > 0.0)) bad(where, "sigma must be positive");
    return g;
  }
  bad(where, "unknown field kind '" + kind + "'");
}

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc,
             {"name", "mode", "domain", "problem", "grid", "map", "potential_grid", "sweep", "tolerances",
              "output_dir", "seed", "max_bisections", "allow_extreme_alpha", "guess_amplitude"},
             "config");
  ExperimentConfig c;
  if (doc.contains("name")) c.name = text(doc["name"], "name");
  if (!doc.contains("mode")) bad("config", "missing 'mode'");
  const std::string mode = text(doc["mode"], "mode");
  if (mode == "branch")
    c.mode = RunMode::Branch;
  else if (mode == "solve")
    c.mode = RunMode::Solve;
  else if (mode == "certificate")
    c.mode = RunMode::Certificate;
  else
    bad("mode", "expected branch, solve or certificate");

  if (doc.contains("domain")) c.domains = one_or_many<DomainShape>(doc["domain"], "domain", &domain_from_json);

  if (!doc.contains("problem")) bad("config", "missing 'problem'");
  const json& pr = doc["problem"];
  require_object(pr, "problem");
  const std::string type = pr.contains("type") ? text(pr["type"], "problem.type") : "";
  if (type == "liouville") {
    check_keys(pr, {"type", "alpha", "lambda", "k"}, "problem");
    c.problem = ProblemKind::Liouville;
    if (pr.contains("alpha")) c.alphas = numbers(pr["alpha"], "problem.alpha");
    if (pr.contains("lambda")) c.lambda = number(pr["lambda"], "problem.lambda");
    if (pr.contains("k")) c.k = field_from_json(pr["k"]);
  } else if (type == "henon") {
    check_keys(pr, {"type", "alpha", "p", "k"}, "problem");
    c.problem = ProblemKind::Henon;
    if (pr.contains("alpha")) c.alphas = numbers(pr["alpha"], "problem.alpha");
    if (pr.contains("p")) c.p = number(pr["p"], "problem.p");
    if (pr.contains("k")) c.k = field_from_json(pr["k"]);
  } else if (type == "system") {
    check_keys(pr, {"type", "a", "lambda", "alpha", "k"}, "problem");
    c.problem = ProblemKind::System;
    if (!pr.contains("a") || !pr["a"].is_array() || pr["a"].empty()) bad("problem.a", "expected a square matrix");
    const auto n = static_cast<Eigen::Index>(pr["a"].size());
    c.coupling.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const json& row = pr["a"][static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) bad("problem.a", "expected a square matrix");
      for (Eigen::Index j = 0; j < n; ++j) c.coupling(i, j) = number(row[static_cast<std::size_t>(j)], "problem.a");
    }
    c.system_lambdas = pr.contains("lambda") ? numbers(pr["lambda"], "problem.lambda")
                                             : std::vector<double>(static_cast<std::size_t>(n), 1.0);
    c.system_alphas = pr.contains("alpha") ? numbers(pr["alpha"], "problem.alpha")
                                           : std::vector<double>(static_cast<std::size_t>(n), 0.0);
    if (pr.contains("k"))
      c.system_ks = one_or_many<AnalyticField>(pr["k"], "problem.k", &field_from_json);
    else
      c.system_ks.assign(static_cast<std::size_t>(n), ConstantField{});
    if (c.system_ks.size() == 1 && n > 1) c.system_ks.assign(static_cast<std::size_t>(n), c.system_ks.front());
  } else if (type == "general") {
    check_keys(pr, {"type", "alpha", "w", "nonlinearity"}, "problem");
    c.problem = ProblemKind::General;
    if (pr.contains("alpha")) c.alphas = numbers(pr["alpha"], "problem.alpha");
    if (pr.contains("w")) c.k = field_from_json(pr["w"]);
    if (pr.contains("nonlinearity")) {
      const json& nl = pr["nonlinearity"];
      check_keys(nl, {"kind", "lambda", "p"}, "problem.nonlinearity");
      if (nl.contains("kind")) c.nonlinearity.kind = text(nl["kind"], "problem.nonlinearity.kind");
      if (nl.contains("lambda")) c.nonlinearity.lambda = number(nl["lambda"], "problem.nonlinearity.lambda");
      if (nl.contains("p")) c.nonlinearity.p = number(nl["p"], "problem.nonlinearity.p");
    }
  } else {
    bad("problem.type", "expected liouville, henon, system or general");
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    check_keys(g, {"n_r", "n_theta", "grading"}, "grid");
    if (g.contains("n_r")) c.grid.n_r = integer(g["n_r"], "grid.n_r");
    if (g.contains("n_theta")) c.grid.n_theta = integer(g["n_theta"], "grid.n_theta");
    if (g.contains("grading")) c.grid.grading = number(g["grading"], "grid.grading");
  }
  if (doc.contains("map")) {
    check_keys(doc["map"], {"n_boundary"}, "map");
    if (doc["map"].contains("n_boundary")) c.map_nodes = integer(doc["map"]["n_boundary"], "map.n_boundary");
  }
  if (doc.contains("potential_grid")) {
    const json& g = doc["potential_grid"];
    check_keys(g, {"n_r", "n_theta"}, "potential_grid");
    if (g.contains("n_r")) c.potential_grid.n_r = integer(g["n_r"], "potential_grid.n_r");
    if (g.contains("n_theta")) c.potential_grid.n_theta = integer(g["n_theta"], "potential_grid.n_theta");
  }
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    check_keys(s, {"parameter", "values", "min", "max", "steps"}, "sweep");
    if (!s.contains("parameter")) bad("sweep", "missing 'parameter'");
    c.sweep.parameter = text(s["parameter"], "sweep.parameter");
    if (s.contains("values")) {
      if (s.contains("min") || s.contains("max") || s.contains("steps"))
        bad("sweep", "give either values or min/max/steps");
      c.sweep.values = numbers(s["values"], "sweep.values");
    } else {
      if (!s.contains("min") || !s.contains("max") || !s.contains("steps")) bad("sweep", "needs values or min/max/steps");
      const double lo = number(s["min"], "sweep.min"), hi = number(s["max"], "sweep.max");
      const int steps = integer(s["steps"], "sweep.steps");
      if (!(hi > lo)) bad("sweep", "range is degenerate (max must exceed min)");
      if (steps < 2) bad("sweep", "steps must be at least 2");
      for (int i = 0; i < steps; ++i) c.sweep.values.push_back(lo + (hi - lo) * i / (steps - 1));
    }
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    check_keys(t, {"newton", "max_iter", "grid_allowance"}, "tolerances");
    if (t.contains("newton")) c.tolerances.newton = number(t["newton"], "tolerances.newton");
    if (t.contains("max_iter")) c.tolerances.max_iter = integer(t["max_iter"], "tolerances.max_iter");
    if (t.contains("grid_allowance"))
      c.tolerances.grid_allowance = number(t["grid_allowance"], "tolerances.grid_allowance");
  }
  if (doc.contains("output_dir")) c.output_dir = text(doc["output_dir"], "output_dir");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) bad("seed", "expected a nonnegative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("max_bisections")) c.max_bisections = integer(doc["max_bisections"], "max_bisections");
  if (doc.contains("allow_extreme_alpha")) {
    if (!doc["allow_extreme_alpha"].is_boolean()) bad("allow_extreme_alpha", "expected a boolean");
    c.allow_extreme_alpha = doc["allow_extreme_alpha"].get<bool>();
  }
  if (doc.contains("guess_amplitude")) c.guess_amplitude = number(doc["guess_amplitude"], "guess_amplitude");
  validate_config(c);
  return c;
}

void validate_config(const ExperimentConfig& c) {
  if (!(c.tolerances.newton > 0.0)) bad("tolerances.newton", "must be positive");
  if (c.tolerances.max_iter < 1) bad("tolerances.max_iter", "must be positive");
  if (!(c.tolerances.grid_allowance > 0.0)) bad("tolerances.grid_allowance", "must be positive");
  if (c.domains.empty()) bad("domain", "at least one domain is required");
  if (c.alphas.empty()) bad("problem.alpha", "at least one alpha is required");
  if (c.grid.n_r < 16 || c.grid.n_theta < 16 || c.grid.n_theta % 2 != 0)
    bad("grid", "n_r, n_theta must be >= 16 and n_theta even");
  if (!(c.grid.grading >= 1.0)) bad("grid.grading", "must be >= 1");
  if (c.map_nodes < 64 || c.map_nodes % 2 != 0) bad("map.n_boundary", "must be even and >= 64");
  if (c.potential_grid.n_r < 3 || c.potential_grid.n_theta < 8 || c.potential_grid.n_theta % 2 != 0)
    bad("potential_grid", "needs n_r >= 3 and even n_theta >= 8");
  if (c.max_bisections < 0) bad("max_bisections", "must be nonnegative");
  if (c.output_dir.empty()) bad("output_dir", "must not be empty");

  const std::string& sp = c.sweep.parameter;
  if (!sp.empty()) {
    if (c.sweep.values.empty()) bad("sweep", "no values");
    auto sorted = c.sweep.values;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) bad("sweep", "values must be distinct");
    if (sorted.size() < 2 && c.mode == RunMode::Branch) bad("sweep", "a branch needs at least two values");
  }
  switch (c.mode) {
    case RunMode::Branch:
      if (c.problem == ProblemKind::Liouville && sp != "s") bad("sweep", "Liouville branches sweep 's'");
      if (c.problem == ProblemKind::Henon && sp != "p") bad("sweep", "Henon branches sweep 'p'");
      if (c.problem != ProblemKind::Liouville && c.problem != ProblemKind::Henon)
        bad("mode", "branch mode needs a liouville or henon problem");
      if (sp == "s" && !(c.sweep.values.front() > 0.0)) bad("sweep", "center values must be positive");
      if (sp == "p")
        for (double p : c.sweep.values)
          if (!(p > 1.0)) bad("sweep", "p values must exceed 1");
      break;
    case RunMode::Solve:
      if (!sp.empty() && sp != "lambda") bad("sweep", "solve mode sweeps 'lambda' only");
      if (c.problem == ProblemKind::Henon && !sp.empty()) bad("sweep", "Henon solves take no lambda sweep");
      break;
    case RunMode::Certificate:
      if (!sp.empty() && sp != "epsilon") bad("sweep", "certificate mode sweeps 'epsilon' only");
      if (sp == "epsilon") {
        if (c.domains.size() != 1 || !std::holds_alternative<Dumbbell>(c.domains.front()))
          bad("sweep", "an epsilon sweep needs exactly one dumbbell domain");
        for (double e : c.sweep.values)
          if (!(e > 0.0 && e < 1.0)) bad("sweep", "epsilon values must lie in (0, 1)");
      }
      if (c.problem == ProblemKind::Henon || c.problem == ProblemKind::General)
        bad("mode", "certificate mode supports liouville and system problems");
      break;
  }
  for (double a : c.alphas)
    if (!(a > -1.0)) bad("problem.alpha", "alpha must exceed -1");
  if (c.problem == ProblemKind::Liouville && !(c.lambda >= 0.0)) bad("problem.lambda", "must be nonnegative");
  if (c.problem == ProblemKind::Henon && !(c.p > 1.0)) bad("problem.p", "must exceed 1");
  if (c.problem == ProblemKind::System) {
    const auto n = static_cast<std::size_t>(c.coupling.rows());
    if (c.system_lambdas.size() != n || c.system_alphas.size() != n || c.system_ks.size() != n)
      bad("problem", "system lambda/alpha/k sizes must match the matrix");
    for (double l : c.system_lambdas)
      if (!(l > 0.0)) bad("problem.lambda", "system lambdas must be positive");
    for (double a : c.system_alphas)
      if (!(a > -1.0)) bad("problem.alpha", "alpha must exceed -1");
  }
  if (c.problem == ProblemKind::General) {
    const auto& k = c.nonlinearity.kind;
    if (k != "exp_power" && k != "exponential" && k != "linear")
      bad("problem.nonlinearity.kind", "expected exp_power, exponential or linear");
    if (k == "exp_power" && (!(c.nonlinearity.lambda > 0.0) || !(c.nonlinearity.p > 0.0)))
      bad("problem.nonlinearity", "exp_power needs lambda > 0 and p > 0");
  }
  if (!(c.guess_amplitude >= 0.0)) bad("guess_amplitude", "must be nonnegative");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IOError, "cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  json doc;
  doc["name"] = c.name;
  doc["mode"] = std::string(to_string(c.mode));
  json domains = json::array();
  for (const auto& d : c.domains) domains.push_back(domain_to_json(d));
  doc["domain"] = domains;
  json pr;
  pr["type"] = std::string(to_string(c.problem));
  switch (c.problem) {
    case ProblemKind::Liouville:
      pr["alpha"] = c.alphas;
      pr["lambda"] = c.lambda;
      pr["k"] = field_to_json(c.k);
      break;
    case ProblemKind::Henon:
      pr["alpha"] = c.alphas;
      pr["p"] = c.p;
      pr["k"] = field_to_json(c.k);
      break;
    case ProblemKind::System: {
      json a = json::array();
      for (Eigen::Index i = 0; i < c.coupling.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < c.coupling.cols(); ++j) row.push_back(c.coupling(i, j));
        a.push_back(row);
      }
      pr["a"] = a;
      pr["lambda"] = c.system_lambdas;
      pr["alpha"] = c.system_alphas;
      json ks = json::array();
      for (const auto& k : c.system_ks) ks.push_back(field_to_json(k));
      pr["k"] = ks;
      break;
    }
    case ProblemKind::General:
      pr["alpha"] = c.alphas;
      pr["w"] = field_to_json(c.k);
      pr["nonlinearity"] = {{"kind", c.nonlinearity.kind}, {"lambda", c.nonlinearity.lambda}, {"p", c.nonlinearity.p}};
      break;
  }
  doc["problem"] = pr;
  doc["grid"] = {{"n_r", c.grid.n_r}, {"n_theta", c.grid.n_theta}, {"grading", c.grid.grading}};
  doc["map"] = {{"n_boundary", c.map_nodes}};
  doc["potential_grid"] = {{"n_r", c.potential_grid.n_r}, {"n_theta", c.potential_grid.n_theta}};
  if (!c.sweep.parameter.empty()) doc["sweep"] = {{"parameter", c.sweep.parameter}, {"values", c.sweep.values}};
  doc["tolerances"] = {{"newton", c.tolerances.newton},
                       {"max_iter", c.tolerances.max_iter},
                       {"grid_allowance", c.tolerances.grid_allowance}};
  doc["output_dir"] = c.output_dir;
  doc["seed"] = c.seed;
  doc["max_bisections"] = c.max_bisections;
  doc["allow_extreme_alpha"] = c.allow_extreme_alpha;
  doc["guess_amplitude"] = c.guess_amplitude;
  return doc;
}

}  // namespace confmass
