#include "confmass/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "confmass/certificates.hpp"
#include "confmass/conformal.hpp"
#include "confmass/continuation.hpp"
#include "confmass/csv.hpp"
#include "confmass/pohozaev.hpp"
#include "confmass/report.hpp"

namespace confmass {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Stopwatch {
 public:
  explicit Stopwatch(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() { sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

std::string run_label(const DomainShape& d, double alpha) {
  return std::string(kind_name(d)) + "/alpha=" + format_number(alpha);
}

std::string file_stem(std::string label) {
  for (char& ch : label)
    if (ch == '/' || ch == '=' || ch == ' ') ch = '_';
  return label;
}

struct Transported {
  DomainSpec domain;
  ConformalMap map;
};

// Checks the inverse/forward round trip at seeded random interior points.
double round_trip_error(const ConformalMap& map, std::mt19937_64& rng, int samples) {
  std::uniform_real_distribution<double> radius(0.0, 0.9), angle(0.0, kTwoPi);
  double worst = 0.0;
  for (int q = 0; q < samples; ++q) {
    const Point y = std::polar(radius(rng), angle(rng));
    worst = std::max(worst, std::abs(map.forward(map.inverse(y)) - y));
  }
  return worst;
}

std::function<double(Point)> field_function(const AnalyticField& f) {
  return [f](Point x) { return evaluate(f, x); };
}

NewtonOptions newton_options(const ExperimentConfig& c) {
  NewtonOptions o;
  o.tol = c.tolerances.newton;
  o.max_iter = c.tolerances.max_iter;
  o.allow_extreme_alpha = c.allow_extreme_alpha;
  return o;
}

std::vector<double> bump_guess(const PolarGrid& g, double amplitude) {
  std::vector<double> v(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.radii[static_cast<std::size_t>(i)];
    for (int j = 0; j < g.n_theta; ++j) v[static_cast<std::size_t>(g.index(i, j))] = amplitude * (1.0 - r * r);
  }
  return v;
}

class Runner {
 public:
  Runner(const ExperimentConfig& c, bool write) : c_(c), write_(write), rng_(c.seed) {
    report_.name = c.name;
    report_.config = to_json(c);
    report_.environment = environment_metadata();
    report_.details["runs"] = json::array();
    if (write_) std::filesystem::create_directories(c.output_dir);
  }

  ExperimentReport run() {
    const auto start = std::chrono::steady_clock::now();
    std::string label = c_.name;
    try {
      if (c_.mode == RunMode::Certificate && c_.sweep.parameter == "epsilon") {
        label = c_.name + "/dumbbell";
        certificate_sweep();
      } else {
        for (const auto& d : c_.domains) {
          if (c_.problem == ProblemKind::System) {
            label = std::string(kind_name(d)) + "/system";
            run_system(d, label);
            continue;
          }
          for (double a : c_.alphas) {
            label = run_label(d, a);
            run_single(d, a, label);
          }
        }
      }
    } catch (const Error& e) {
      report_.partial = true;
      report_.error = label + ": " + e.what();
      finish(start);
      throw Error(e.code(), c_.name + " [" + label + "]: " + e.what());
    }
    finish(start);
    return std::move(report_);
  }

 private:
  void finish(std::chrono::steady_clock::time_point start) {
    report_.timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!write_) return;
    emit_report(report_, ReportFormat::Json, c_.output_dir);
    emit_report(report_, ReportFormat::Csv, c_.output_dir);
  }

  std::string path(const std::string& name) const { return (std::filesystem::path(c_.output_dir) / name).string(); }

  Transported transport_domain(const DomainShape& shape, const std::string& label, json& run) {
    double& t = report_.timings["map"];
    Stopwatch sw(t);
    DomainSpec dom = build_domain(shape);
    ConformalMap map = compute_map(dom, c_.map_nodes);
    const double rt = round_trip_error(map, rng_, 16);
    run["map"] = {{"n_boundary", c_.map_nodes},
                  {"phi_prime_at_origin", map.phi_prime_at_origin()},
                  {"boundary_modulus_residual", map.boundary_modulus_residual()},
                  {"equation_residual", map.equation_residual()},
                  {"spectral_tail", map.spectral_tail()},
                  {"distortion", map.distortion()},
                  {"round_trip_error", rt}};
    if (write_) write_map_csv(map, path("map_" + file_stem(label) + ".csv"));
    return {std::move(dom), std::move(map)};
  }

  PotentialField transport_field(const ConformalMap& map, double alpha, const AnalyticField& f,
                                 const std::string& label, bool allow_zero = false) {
    Stopwatch sw(report_.timings["transport"]);
    PotentialField k = allow_zero && alpha == 0.0 ? transform_weight(map, field_function(f), c_.potential_grid)
                                                  : transform_potential(map, alpha, field_function(f), c_.potential_grid);
    if (write_) write_potential_csv(k, path("potential_" + file_stem(label) + ".csv"));
    return k;
  }

  void add_record(const std::string& label, double s, double parameter, const DiskSolution* sol,
                  const PohozaevReport* rep, double rho0, double mass_value) {
    RunRecord r;
    r.label = label;
    r.s = s;
    r.parameter = parameter;
    r.mass = mass_value;
    r.sup_norm = sol ? sol->sup_norm : kNaN;
    r.residual = rep ? rep->relative_residual : kNaN;
    r.holder_gap = rep ? rep->holder_gap : kNaN;
    r.rho0 = rho0;
    r.pass = std::isnan(mass_value) ? (rho0 > 0.0 && std::isfinite(rho0))
                                    : within_certificate(mass_value, rho0, c_.tolerances.grid_allowance);
    report_.records.push_back(std::move(r));
  }

  static double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  void run_single(const DomainShape& shape, double alpha, const std::string& label) {
    const auto t0 = std::chrono::steady_clock::now();
    json run = {{"label", label}};
    Transported tr = transport_domain(shape, label, run);
    const PolarGrid grid = build_grid(c_.grid.n_r, c_.grid.n_theta, alpha, c_.grid.grading);
    const NewtonOptions opt = newton_options(c_);

    switch (c_.problem) {
      case ProblemKind::Liouville: {
        PotentialField k = transport_field(tr.map, alpha, c_.k, label);
        MassCertificate cert = liouville_certificate(alpha, k);
        if (c_.mode == RunMode::Certificate) {
          add_record(label, kNaN, kNaN, nullptr, nullptr, cert.rho0, kNaN);
          run["certificate"] = to_json(cert);
          run["ratio"] = k.extrema().sup_gradient / k.extrema().inf_value;
          break;
        }
        std::vector<DiskSolution> sols;
        std::vector<double> params, centers;
        if (c_.mode == RunMode::Branch) {
          Stopwatch sw(report_.timings["solve"]);
          ContinuationOptions co;
          co.newton = opt;
          co.keep_solutions = true;
          co.max_bisections = c_.max_bisections;
          ContinuationBranch b = continuation_branch(LiouvilleProblem{0.0, alpha, k}, c_.sweep.values, grid, co);
          if (write_) write_branch_csv(b, path("branch_" + file_stem(label) + ".csv"));
          run["branch"] = {{"points", b.points.size()},
                           {"truncated", b.truncated},
                           {"message", b.message},
                           {"max_lambda", b.max_parameter()},
                           {"max_mass", b.max_mass()}};
          if (b.fold) run["branch"]["fold"] = {{"s", b.fold->s}, {"lambda", b.fold->parameter}};
          for (std::size_t q = 0; q < b.points.size(); ++q) {
            params.push_back(b.points[q].parameter);
            centers.push_back(b.points[q].s);
          }
          sols = std::move(b.solutions);
        } else {
          Stopwatch sw(report_.timings["solve"]);
          std::vector<double> lambdas = c_.sweep.values.empty() ? std::vector<double>{c_.lambda} : c_.sweep.values;
          std::vector<double> guess = c_.guess_amplitude > 0.0 ? bump_guess(grid, c_.guess_amplitude)
                                                               : std::vector<double>{};
          for (double lam : lambdas) {
            DiskSolution s = solve_newton(LiouvilleProblem{lam, alpha, k}, grid, guess, opt);
            guess = s.values;
            params.push_back(lam);
            centers.push_back(center_value(grid, s.values));
            if (write_) write_solution_csv(s, path("solution_" + file_stem(label) + "_lambda_" + format_number(lam) + ".csv"));
            sols.push_back(std::move(s));
          }
        }
        for (std::size_t q = 0; q < sols.size(); ++q) {
          const PohozaevReport rep = pohozaev_report(sols[q]);
          cert.observe(rep.mass);
          add_record(label, centers[q], params[q], &sols[q], &rep, cert.rho0, rep.mass);
          run["pohozaev"].push_back(to_json(rep));
        }
        run["certificate"] = to_json(cert);
        break;
      }
      case ProblemKind::Henon: {
        PotentialField k = transport_field(tr.map, alpha, c_.k, label);
        std::vector<DiskSolution> sols;
        std::vector<double> ps;
        {
          Stopwatch sw(report_.timings["solve"]);
          if (c_.mode == RunMode::Branch) {
            ContinuationOptions co;
            co.newton = opt;
            co.keep_solutions = true;
            co.max_bisections = c_.max_bisections;
            ContinuationBranch b = henon_sweep(HenonProblem{2.0, alpha, k}, c_.sweep.values, grid, co);
            if (write_) write_branch_csv(b, path("branch_" + file_stem(label) + ".csv"));
            run["branch"] = {{"points", b.points.size()}, {"truncated", b.truncated}, {"message", b.message}};
            if (b.truncated) fail(ErrorCode::NewtonDiverged, b.message);
            for (const auto& pt : b.points) ps.push_back(pt.parameter);
            sols = std::move(b.solutions);
          } else {
            sols.push_back(henon_ground_state(HenonProblem{c_.p, alpha, k}, grid, {}, opt));
            ps.push_back(c_.p);
          }
        }
        double c0 = 0.0;
        for (const auto& s : sols) c0 = std::max(c0, s.sup_norm);
        const double p0 = *std::min_element(ps.begin(), ps.end());
        MassCertificate cert = henon_certificate(alpha, k, c0, p0);
        json sups = json::array();
        for (std::size_t q = 0; q < sols.size(); ++q) {
          const PohozaevReport rep = pohozaev_report(sols[q]);
          cert.observe(rep.mass);
          add_record(label, center_value(grid, sols[q].values), ps[q], &sols[q], &rep, cert.rho0, rep.mass);
          run["pohozaev"].push_back(to_json(rep));
          sups.push_back(sols[q].sup_norm);
        }
        run["sup_norms"] = sups;
        run["c0"] = c0;
        run["certificate"] = to_json(cert);
        break;
      }
      case ProblemKind::General: {
        PotentialField w = transport_field(tr.map, alpha, c_.k, label, true);
        std::vector<double> lambdas =
            c_.sweep.values.empty() ? std::vector<double>{c_.nonlinearity.lambda} : c_.sweep.values;
        std::vector<double> guess =
            c_.guess_amplitude > 0.0 ? bump_guess(grid, c_.guess_amplitude) : std::vector<double>{};
        for (double lam : lambdas) {
          Nonlinearity nl = c_.nonlinearity.kind == "exp_power" ? exp_power_nonlinearity(lam, c_.nonlinearity.p)
                            : c_.nonlinearity.kind == "exponential" ? exponential_nonlinearity()
                                                                    : linear_nonlinearity();
          DiskSolution s = [&] {
            Stopwatch sw(report_.timings["solve"]);
            return solve_newton(GeneralProblem{alpha, w, nl}, grid, guess, opt);
          }();
          guess = s.values;
          const PohozaevReport rep = pohozaev_report(s);
          const double u_max = 2.0 * std::max(s.sup_norm, 0.5);
          const ConditionConstants cc = validate_general_conditions(w, alpha, nl, u_max);
          MassCertificate cert = general_certificate(cc);
          cert.observe(rep.mass);
          add_record(label, center_value(grid, s.values), lam, &s, &rep, cert.rho0, rep.mass);
          run["pohozaev"].push_back(to_json(rep));
          run["certificate"].push_back(to_json(cert));
          if (write_) write_solution_csv(s, path("solution_" + file_stem(label) + "_lambda_" + format_number(lam) + ".csv"));
        }
        break;
      }
      case ProblemKind::System:
        break;
    }
    run["seconds"] = seconds_since(t0);
    report_.details["runs"].push_back(run);
  }

  void run_system(const DomainShape& shape, const std::string& label) {
    const auto t0 = std::chrono::steady_clock::now();
    json run = {{"label", label}};
    Transported tr = transport_domain(shape, label, run);
    const auto n = c_.system_lambdas.size();
    std::vector<PotentialField> ks;
    for (std::size_t i = 0; i < n; ++i)
      ks.push_back(transport_field(tr.map, c_.system_alphas[i], c_.system_ks[i], label + "/" + std::to_string(i)));
    MassCertificate cert = system_certificate(c_.coupling, c_.system_alphas, ks);
    if (c_.mode == RunMode::Certificate) {
      add_record(label, kNaN, kNaN, nullptr, nullptr, cert.rho0, kNaN);
      run["certificate"] = to_json(cert);
      report_.details["runs"].push_back(run);
      return;
    }
    const double amin = *std::min_element(c_.system_alphas.begin(), c_.system_alphas.end());
    const PolarGrid grid = build_grid(c_.grid.n_r, c_.grid.n_theta, amin, c_.grid.grading);
    SystemProblem sp{c_.coupling, c_.system_lambdas, c_.system_alphas, ks};
    std::vector<DiskSolution> sols;
    {
      Stopwatch sw(report_.timings["solve"]);
      sols = solve_system(sp, grid, newton_options(c_));
    }
    const SystemPohozaevReport rep = system_pohozaev_report(sols, c_.coupling);
    for (std::size_t i = 0; i < sols.size(); ++i) {
      cert.observe(rep.masses[i]);
      RunRecord r;
      r.label = label + "/component=" + std::to_string(i);
      r.s = center_value(grid, sols[i].values);
      r.parameter = c_.system_lambdas[i];
      r.mass = rep.masses[i];
      r.sup_norm = sols[i].sup_norm;
      r.residual = rep.relative_residual;
      const double f = rep.fluxes[i];
      double lhs = 0.0;
      for (double d : sols[i].normal_derivative) lhs += 0.5 * d * d * grid.dtheta;
      r.holder_gap = lhs - f * f / (4.0 * kPi);
      r.rho0 = cert.rho0;
      r.pass = within_certificate(r.mass, r.rho0, c_.tolerances.grid_allowance);
      report_.records.push_back(std::move(r));
      if (write_) write_solution_csv(sols[i], path("solution_" + file_stem(label) + "_" + std::to_string(i) + ".csv"));
    }
    run["pohozaev"] = to_json(rep);
    run["certificate"] = to_json(cert);
    run["seconds"] = seconds_since(t0);
    report_.details["runs"].push_back(run);
  }

  void certificate_sweep() {
    std::vector<double> eps = c_.sweep.values;
    std::sort(eps.begin(), eps.end(), std::greater<>());
    double previous = -1.0;
    json rhos = json::array();
    for (double e : eps) {
      for (double a : c_.alphas) {
        const std::string label = "dumbbell/eps=" + format_number(e) + "/alpha=" + format_number(a);
        json run = {{"label", label}, {"epsilon", e}};
        Transported tr = transport_domain(Dumbbell{e}, label, run);
        PotentialField k = transport_field(tr.map, a, c_.k, label);
        MassCertificate cert = liouville_certificate(a, k);
        run["certificate"] = to_json(cert);
        run["ratio"] = k.extrema().sup_gradient / k.extrema().inf_value;
        run["neck_half_width"] = half_width_at(tr.domain, 0.0);
        RunRecord r;
        r.label = label;
        r.s = kNaN;
        r.parameter = e;
        r.mass = kNaN;
        r.sup_norm = kNaN;
        r.residual = kNaN;
        r.holder_gap = kNaN;
        r.rho0 = cert.rho0;
        // Along decreasing neck width the certificate must grow strictly.
        r.pass = std::isfinite(cert.rho0) && cert.rho0 > 0.0 && (c_.alphas.size() > 1 || cert.rho0 > previous);
        previous = cert.rho0;
        report_.records.push_back(std::move(r));
        rhos.push_back(cert.rho0);
        report_.details["runs"].push_back(run);
      }
    }
    report_.details["rho0_by_epsilon"] = rhos;
  }

  const ExperimentConfig& c_;
  bool write_;
  std::mt19937_64 rng_;
  ExperimentReport report_;
};

ExperimentConfig liouville_branch(const std::string& name, std::vector<double> alphas, double grading) {
  ExperimentConfig c;
  c.name = name;
  c.mode = RunMode::Branch;
  c.problem = ProblemKind::Liouville;
  c.alphas = std::move(alphas);
  c.grid = {256, 64, grading};
  c.map_nodes = 128;
  c.sweep.parameter = "s";
  const double s_max = 2.0 * std::log(101.0);
  for (int i = 0; i < 40; ++i) c.sweep.values.push_back(0.1 + (s_max - 0.1) * i / 39.0);
  return c;
}

}  // namespace

bool ExperimentReport::all_pass() const {
  if (partial) return false;
  return std::all_of(records.begin(), records.end(), [](const RunRecord& r) { return r.pass; });
}

bool within_certificate(double mass, double rho0, double allowance) { return mass <= rho0 * (1.0 + allowance); }

std::vector<std::string> builtin_names() { return {"E1", "E2", "E3", "E4", "E5", "E6", "E7"}; }

ExperimentConfig builtin_config(std::string_view name) {
  ExperimentConfig c;
  if (name == "E1") {
    c = liouville_branch("E1", {0.0}, 1.0);
  } else if (name == "E2") {
    c = liouville_branch("E2", {-0.5, 0.5, 1.0}, 2.0);
  } else if (name == "E3") {
    c.name = "E3";
    c.mode = RunMode::Solve;
    c.problem = ProblemKind::Liouville;
    c.domains = {Ellipse{1.5, 1.0}, FourierBlob{{1.0, 0.0, 0.15}, {0.0, 0.0, 0.0, 0.1}}};
    c.k = AffineField{1.0, 0.25, 0.1};
    c.grid = {256, 64, 1.0};
    c.map_nodes = 512;
    c.sweep = {"lambda", {0.5, 1.0}};
  } else if (name == "E4") {
    c.name = "E4";
    c.mode = RunMode::Certificate;
    c.problem = ProblemKind::Liouville;
    c.domains = {Dumbbell{0.5}};
    c.map_nodes = 1024;
    c.sweep = {"epsilon", {0.5, 0.25, 0.125}};
  } else if (name == "E5") {
    c.name = "E5";
    c.mode = RunMode::Branch;
    c.problem = ProblemKind::Henon;
    c.grid = {256, 64, 3.0};
    c.map_nodes = 128;
    c.sweep = {"p", {2.0, 5.0, 10.0, 20.0}};
  } else if (name == "E6") {
    c.name = "E6";
    c.mode = RunMode::Solve;
    c.problem = ProblemKind::System;
    c.coupling = Eigen::MatrixXd{{2.0, -1.0}, {-1.0, 2.0}};
    c.system_lambdas = {1.0, 1.0};
    c.system_alphas = {0.0, 0.0};
    c.system_ks = {ConstantField{}, ConstantField{}};
    c.grid = {256, 64, 1.0};
    c.map_nodes = 128;
  } else if (name == "E7") {
    c.name = "E7";
    c.mode = RunMode::Solve;
    c.problem = ProblemKind::General;
    c.nonlinearity = {"exp_power", 1.0, 1.5};
    c.guess_amplitude = 0.5;
    c.grid = {256, 64, 1.0};
    c.map_nodes = 128;
  } else {
    fail(ErrorCode::ConfigError, "unknown builtin experiment '" + std::string(name) + "'");
  }
  c.seed = 20240601;
  c.output_dir = "confmass_out/" + c.name;
  validate_config(c);
  return c;
}

ExperimentReport run_experiment(const ExperimentConfig& config, bool write_files) {
  validate_config(config);
  Runner runner(config, write_files);
  return runner.run();
}

}  // namespace confmass
