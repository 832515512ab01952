// Command line front end: map, solve, sweep, certify, pohozaev, experiment, report.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "confmass/certificates.hpp"
#include "confmass/conformal.hpp"
#include "confmass/config.hpp"
#include "confmass/continuation.hpp"
#include "confmass/csv.hpp"
#include "confmass/experiment.hpp"
#include "confmass/pohozaev.hpp"
#include "confmass/report.hpp"

using namespace confmass;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string grid;
  double tol = 0.0;
  std::string out;
  std::int64_t seed = -1;
  std::string format = "json";
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--grid", f.grid, "polar grid as NRxNT, e.g. 256x64");
  app->add_option("--tol", f.tol, "Newton tolerance")->check(CLI::PositiveNumber);
  app->add_option("--out", f.out, "output directory");
  app->add_option("--seed", f.seed, "seed for sampled validation points")->check(CLI::NonNegativeNumber);
  app->add_option("--format", f.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

void apply_common(const CommonFlags& f, ExperimentConfig& c) {
  if (!f.grid.empty()) {
    const auto x = f.grid.find('x');
    if (x == std::string::npos) fail(ErrorCode::ConfigError, "--grid expects NRxNT");
    try {
      c.grid.n_r = std::stoi(f.grid.substr(0, x));
      c.grid.n_theta = std::stoi(f.grid.substr(x + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::ConfigError, "--grid expects NRxNT");
    }
  }
  if (f.tol > 0.0) c.tolerances.newton = f.tol;
  if (!f.out.empty()) c.output_dir = f.out;
  if (f.seed >= 0) c.seed = static_cast<std::uint64_t>(f.seed);
  validate_config(c);
}

json parse_json_arg(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ConfigError, what + " is not valid JSON: " + e.what());
  }
}

int finish(const ExperimentReport& report, const CommonFlags& f, const std::string& dir) {
  const std::string path = emit_report(report, parse_format(f.format), dir);
  std::size_t passed = 0;
  for (const auto& r : report.records) passed += r.pass ? 1 : 0;
  std::cout << report.name << ": " << passed << "/" << report.records.size() << " records pass, report "
            << path << '\n';
  return report.all_pass() ? 0 : 1;
}

ExperimentConfig config_or_builtin(const std::string& what) {
  for (const auto& n : builtin_names())
    if (n == what) return builtin_config(n);
  return load_config(what);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal mass-bound laboratory"};
  app.require_subcommand(1);

  // map
  CommonFlags map_flags;
  std::string map_domain = R"({"kind":"unit_disk"})";
  int map_nodes = 512;
  auto* map_cmd = app.add_subcommand("map", "compute and export a conformal map");
  map_cmd->add_option("--domain", map_domain, "domain as JSON {\"kind\":...,\"params\":{...}}");
  map_cmd->add_option("--nodes", map_nodes, "boundary nodes (even, >= 64)");
  add_common(map_cmd, map_flags);

  // solve
  CommonFlags solve_flags;
  std::string solve_config, solve_domain = R"({"kind":"unit_disk"})", solve_k = R"({"kind":"constant","value":1})";
  double solve_lambda = 1.0, solve_alpha = 0.0;
  auto* solve_cmd = app.add_subcommand("solve", "single Liouville solve (or a solve-mode config)");
  solve_cmd->add_option("--config", solve_config, "experiment config file in solve mode");
  solve_cmd->add_option("--domain", solve_domain, "domain as JSON");
  solve_cmd->add_option("--k", solve_k, "potential K on the domain as JSON");
  solve_cmd->add_option("--lambda", solve_lambda, "lambda");
  solve_cmd->add_option("--alpha", solve_alpha, "singular exponent alpha");
  add_common(solve_cmd, solve_flags);

  // sweep
  CommonFlags sweep_flags;
  double sweep_alpha = 0.0, s_min = 0.1, s_max = 2.0 * std::log(101.0);
  int sweep_steps = 40;
  std::vector<double> p_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "center-value continuation on the disk, or a Henon p-sweep");
  sweep_cmd->add_option("--alpha", sweep_alpha, "singular exponent alpha");
  sweep_cmd->add_option("--s-min", s_min, "first center value");
  sweep_cmd->add_option("--s-max", s_max, "last center value");
  sweep_cmd->add_option("--steps", sweep_steps, "number of center values");
  sweep_cmd->add_option("--henon-p", p_values, "sweep Henon exponents instead (e.g. --henon-p 2 5 10 20)");
  add_common(sweep_cmd, sweep_flags);

  // certify
  CommonFlags cert_flags;
  std::string cert_domain = R"({"kind":"unit_disk"})", cert_k = R"({"kind":"constant","value":1})";
  double cert_alpha = 0.0;
  auto* cert_cmd = app.add_subcommand("certify", "Liouville mass certificate for a domain and potential");
  cert_cmd->add_option("--domain", cert_domain, "domain as JSON");
  cert_cmd->add_option("--k", cert_k, "potential K on the domain as JSON");
  cert_cmd->add_option("--alpha", cert_alpha, "singular exponent alpha");
  add_common(cert_cmd, cert_flags);

  // pohozaev
  CommonFlags poho_flags;
  std::string poho_config, poho_solution;
  double poho_lambda = -1.0;
  auto* poho_cmd = app.add_subcommand("pohozaev", "identity check on a stored solution CSV");
  poho_cmd->add_option("--config", poho_config, "config (or report.json) the solution was produced with")
      ->required();
  poho_cmd->add_option("--solution", poho_solution, "solution CSV with columns r, theta, v")->required();
  poho_cmd->add_option("--lambda", poho_lambda, "lambda of the stored solution (default: config value)");
  add_common(poho_cmd, poho_flags);

  // experiment
  CommonFlags exp_flags;
  std::string exp_name;
  auto* exp_cmd = app.add_subcommand("experiment", "run a builtin experiment (E1..E7, all) or a config file");
  exp_cmd->add_option("name", exp_name, "E1..E7, all, or a config path")->required();
  add_common(exp_cmd, exp_flags);

  // report
  CommonFlags rep_flags;
  std::string rep_input;
  auto* rep_cmd = app.add_subcommand("report", "re-emit a stored report.json as json or csv");
  rep_cmd->add_option("input", rep_input, "report.json path")->required();
  add_common(rep_cmd, rep_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (map_cmd->parsed()) {
      const std::string dir = map_flags.out.empty() ? "confmass_out/map" : map_flags.out;
      std::filesystem::create_directories(dir);
      const DomainSpec dom = build_domain(domain_from_json(parse_json_arg(map_domain, "--domain")));
      const ConformalMap m = compute_map(dom, map_nodes);
      write_map_csv(m, (std::filesystem::path(dir) / "map.csv").string());
      json summary = {{"n_boundary", m.size()},
                      {"phi_prime_at_origin", m.phi_prime_at_origin()},
                      {"boundary_modulus_residual", m.boundary_modulus_residual()},
                      {"equation_residual", m.equation_residual()},
                      {"spectral_tail", m.spectral_tail()},
                      {"distortion", m.distortion()}};
      std::ofstream((std::filesystem::path(dir) / "map.json").string()) << summary.dump(2) << '\n';
      std::cout << summary.dump(2) << '\n';
      return 0;
    }
    if (solve_cmd->parsed()) {
      ExperimentConfig c;
      if (!solve_config.empty()) {
        c = load_config(solve_config);
      } else {
        c.name = "solve";
        c.mode = RunMode::Solve;
        c.domains = {domain_from_json(parse_json_arg(solve_domain, "--domain"))};
        c.k = field_from_json(parse_json_arg(solve_k, "--k"));
        c.alphas = {solve_alpha};
        c.lambda = solve_lambda;
        c.output_dir = "confmass_out/solve";
      }
      apply_common(solve_flags, c);
      const ExperimentReport r = run_experiment(c);
      return finish(r, solve_flags, c.output_dir);
    }
    if (sweep_cmd->parsed()) {
      ExperimentConfig c;
      c.name = "sweep";
      c.mode = RunMode::Branch;
      c.alphas = {sweep_alpha};
      c.map_nodes = 128;
      c.output_dir = "confmass_out/sweep";
      if (!p_values.empty()) {
        c.problem = ProblemKind::Henon;
        c.grid.grading = 3.0;
        c.sweep = {"p", p_values};
      } else {
        if (sweep_steps < 2 || !(s_max > s_min)) fail(ErrorCode::ConfigError, "sweep range is degenerate");
        c.sweep.parameter = "s";
        for (int i = 0; i < sweep_steps; ++i) c.sweep.values.push_back(s_min + (s_max - s_min) * i / (sweep_steps - 1));
      }
      apply_common(sweep_flags, c);
      const ExperimentReport r = run_experiment(c);
      return finish(r, sweep_flags, c.output_dir);
    }
    if (cert_cmd->parsed()) {
      ExperimentConfig c;
      c.name = "certify";
      c.mode = RunMode::Certificate;
      c.domains = {domain_from_json(parse_json_arg(cert_domain, "--domain"))};
      c.k = field_from_json(parse_json_arg(cert_k, "--k"));
      c.alphas = {cert_alpha};
      c.output_dir = "confmass_out/certify";
      apply_common(cert_flags, c);
      const ExperimentReport r = run_experiment(c);
      return finish(r, cert_flags, c.output_dir);
    }
    if (poho_cmd->parsed()) {
      std::ifstream in(poho_config);
      if (!in) fail(ErrorCode::IOError, "cannot open " + poho_config);
      json doc = json::parse(in);
      if (doc.contains("config") && doc.contains("records")) doc = doc["config"];
      ExperimentConfig c = parse_config(doc);
      apply_common(poho_flags, c);
      if (c.domains.size() != 1 || c.alphas.size() != 1 || c.problem == ProblemKind::System)
        fail(ErrorCode::UnsupportedProblem, "pohozaev needs a single-domain, single-alpha scalar config");
      const double alpha = c.alphas.front();
      const PolarGrid grid = build_grid(c.grid.n_r, c.grid.n_theta, alpha, c.grid.grading);
      const CsvTable table = read_csv(poho_solution);
      const int vcol = table.column("v");
      if (table.rows.size() != static_cast<std::size_t>(grid.size()))
        fail(ErrorCode::InvalidParameter, "solution rows do not match the configured grid");
      std::vector<double> v;
      for (const auto& row : table.rows) v.push_back(row[static_cast<std::size_t>(vcol)]);
      const DomainSpec dom = build_domain(c.domains.front());
      const ConformalMap m = compute_map(dom, c.map_nodes);
      const auto kf = [&](Point x) { return evaluate(c.k, x); };
      const PotentialField k = transform_potential(m, alpha, kf, c.potential_grid);
      ProblemSpec spec;
      const double lam = poho_lambda >= 0.0 ? poho_lambda : c.lambda;
      switch (c.problem) {
        case ProblemKind::Liouville: spec = LiouvilleProblem{lam, alpha, k}; break;
        case ProblemKind::Henon: spec = HenonProblem{c.p, alpha, k}; break;
        case ProblemKind::General:
          spec = GeneralProblem{alpha, k,
                                c.nonlinearity.kind == "exp_power"
                                    ? exp_power_nonlinearity(poho_lambda >= 0.0 ? lam : c.nonlinearity.lambda,
                                                             c.nonlinearity.p)
                                : c.nonlinearity.kind == "exponential" ? exponential_nonlinearity()
                                                                       : linear_nonlinearity()};
          break;
        default: break;
      }
      const double res = nonlinear_residual(spec, grid, v);
      DiskSolution sol = assemble_solution(grid, v, std::make_shared<const ProblemSpec>(spec), res,
                                           res < c.tolerances.newton * 100.0, 0);
      const PohozaevReport rep = pohozaev_report(sol);
      json out = to_json(rep);
      out["nonlinear_residual"] = res;
      const std::string dir = poho_flags.out.empty() ? "confmass_out/pohozaev" : poho_flags.out;
      std::filesystem::create_directories(dir);
      std::ofstream((std::filesystem::path(dir) / "pohozaev.json").string()) << out.dump(2) << '\n';
      std::cout << out.dump(2) << '\n';
      return rep.relative_residual < 1e-3 ? 0 : 1;
    }
    if (exp_cmd->parsed()) {
      std::vector<ExperimentConfig> configs;
      if (exp_name == "all")
        for (const auto& n : builtin_names()) configs.push_back(builtin_config(n));
      else
        configs.push_back(config_or_builtin(exp_name));
      int status = 0;
      for (auto& c : configs) {
        if (!exp_flags.out.empty())
          c.output_dir = (std::filesystem::path(exp_flags.out) / (configs.size() > 1 ? c.name : "")).string();
        CommonFlags f = exp_flags;
        f.out.clear();
        apply_common(f, c);
        const ExperimentReport r = run_experiment(c);
        status |= finish(r, exp_flags, c.output_dir);
      }
      return status;
    }
    if (rep_cmd->parsed()) {
      const ExperimentReport r = load_report(rep_input);
      const std::string dir =
          rep_flags.out.empty() ? std::filesystem::path(rep_input).parent_path().string() : rep_flags.out;
      return finish(r, rep_flags, dir.empty() ? "." : dir);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
