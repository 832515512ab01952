#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "confmass/certificates.hpp"
#include "confmass/conformal.hpp"
#include "confmass/config.hpp"
#include "confmass/continuation.hpp"
#include "confmass/experiment.hpp"
#include "confmass/pohozaev.hpp"
#include "confmass/radial_oracle.hpp"
#include "confmass/report.hpp"

namespace py = pybind11;
using namespace confmass;

namespace {

DomainSpec domain_from_string(const std::string& text) {
  return build_domain(domain_from_json(nlohmann::json::parse(text)));
}

PotentialField field_on_disk(const std::string& text, int n_r, int n_theta) {
  const AnalyticField f = field_from_json(nlohmann::json::parse(text));
  return PotentialField::from_function(n_r, n_theta, FieldSign::Positive,
                                       [&](double r, double t) { return evaluate(f, std::polar(r, t)); });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Conformal mapping, disk solvers, Pohozaev residuals and mass certificates";

  py::register_exception<Error>(m, "ConfmassError");

  py::class_<DomainSpec>(m, "Domain")
      .def("point", &DomainSpec::point)
      .def("boundary_point", [](const DomainSpec& d, double t) {
        const BoundaryFrame f = boundary_point(d, t);
        return py::make_tuple(f.point, f.tangent, f.normal);
      });
  m.def("build_domain", &domain_from_string, py::arg("spec_json"),
        "Domain from JSON such as '{\"kind\": \"ellipse\", \"params\": {\"a\": 1.5, \"b\": 1}}'.");

  py::class_<ConformalMap>(m, "ConformalMap")
      .def("forward", &ConformalMap::forward)
      .def("inverse", &ConformalMap::inverse)
      .def("derivative", &ConformalMap::derivative)
      .def_property_readonly("t", &ConformalMap::t)
      .def_property_readonly("theta", &ConformalMap::theta)
      .def_property_readonly("phi_prime_at_origin", &ConformalMap::phi_prime_at_origin)
      .def_property_readonly("boundary_modulus_residual", &ConformalMap::boundary_modulus_residual);
  m.def("compute_map", &compute_map, py::arg("domain"), py::arg("n_boundary_nodes") = 512);
  m.def("conformal_factor", &conformal_factor, py::arg("map"), py::arg("y"));

  py::class_<PotentialField>(m, "PotentialField")
      .def_static("constant", &PotentialField::constant, py::arg("value"), py::arg("n_r") = 16,
                  py::arg("n_theta") = 32)
      .def("value", &PotentialField::value)
      .def_property_readonly("inf_value", [](const PotentialField& f) { return f.extrema().inf_value; })
      .def_property_readonly("sup_gradient", [](const PotentialField& f) { return f.extrema().sup_gradient; });
  m.def("field_on_disk", &field_on_disk, py::arg("field_json"), py::arg("n_r") = 64, py::arg("n_theta") = 128,
        "Samples an analytic field given as JSON on the closed disk.");
  m.def(
      "transform_potential",
      [](const ConformalMap& map, double alpha, const std::string& field_json, int n_r, int n_theta) {
        const AnalyticField f = field_from_json(nlohmann::json::parse(field_json));
        return transform_potential(map, alpha, [&](Point x) { return evaluate(f, x); }, {n_r, n_theta});
      },
      py::arg("map"), py::arg("alpha"), py::arg("field_json"), py::arg("n_r") = 64, py::arg("n_theta") = 128);

  py::class_<PolarGrid>(m, "PolarGrid")
      .def_readonly("n_r", &PolarGrid::n_r)
      .def_readonly("n_theta", &PolarGrid::n_theta)
      .def_readonly("radii", &PolarGrid::radii)
      .def_readonly("moments", &PolarGrid::moments)
      .def_readonly("dtheta", &PolarGrid::dtheta);
  m.def("build_grid", &build_grid, py::arg("n_r"), py::arg("n_theta"), py::arg("alpha") = 0.0,
        py::arg("grading") = 1.0);
  m.def(
      "integrate", [](const PolarGrid& g, const std::vector<double>& v, bool singular) {
        return integrate(g, v, singular ? Weight::Singular : Weight::None);
      },
      py::arg("grid"), py::arg("values"), py::arg("singular") = false);

  m.def(
      "radial_oracle",
      [](double alpha, double b) {
        const RadialOracle o = radial_oracle(alpha, b);
        return py::dict(py::arg("lambda") = o.lambda, py::arg("mass") = o.mass, py::arg("sup_norm") = o.sup_norm);
      },
      py::arg("alpha"), py::arg("b"));

  py::class_<DiskSolution>(m, "DiskSolution")
      .def_readonly("values", &DiskSolution::values)
      .def_readonly("normal_derivative", &DiskSolution::normal_derivative)
      .def_readonly("residual", &DiskSolution::residual)
      .def_readonly("sup_norm", &DiskSolution::sup_norm)
      .def_readonly("converged", &DiskSolution::converged)
      .def_readonly("iterations", &DiskSolution::iterations)
      .def_readonly("grid", &DiskSolution::grid)
      .def("flux", &DiskSolution::flux);

  m.def(
      "solve_liouville",
      [](double lambda, double alpha, const PotentialField& k, const PolarGrid& grid, std::vector<double> guess,
         double tol) {
        NewtonOptions o;
        o.tol = tol;
        return solve_newton(LiouvilleProblem{lambda, alpha, k}, grid, guess, o);
      },
      py::arg("lambda_"), py::arg("alpha"), py::arg("k"), py::arg("grid"), py::arg("guess") = std::vector<double>{},
      py::arg("tol") = 1e-10);
  m.def(
      "solve_henon",
      [](double p, double alpha, const PotentialField& k, const PolarGrid& grid) {
        return solve_newton(HenonProblem{p, alpha, k}, grid);
      },
      py::arg("p"), py::arg("alpha"), py::arg("k"), py::arg("grid"));
  m.def(
      "solve_system",
      [](const Eigen::MatrixXd& a, std::vector<double> lambdas, std::vector<double> alphas,
         std::vector<PotentialField> ks, const PolarGrid& grid) {
        return solve_system(SystemProblem{a, lambdas, alphas, ks}, grid);
      },
      py::arg("a"), py::arg("lambdas"), py::arg("alphas"), py::arg("ks"), py::arg("grid"));
  m.def(
      "continuation_branch",
      [](double alpha, const PotentialField& k, const std::vector<double>& s_values, const PolarGrid& grid) {
        const ContinuationBranch b = continuation_branch(LiouvilleProblem{0.0, alpha, k}, s_values, grid);
        py::list pts;
        for (const auto& p : b.points)
          pts.append(py::dict(py::arg("s") = p.s, py::arg("lambda") = p.parameter, py::arg("mass") = p.mass,
                              py::arg("sup_norm") = p.sup_norm, py::arg("residual") = p.residual));
        py::object fold = py::none();
        if (b.fold) fold = py::make_tuple(b.fold->s, b.fold->parameter);
        return py::dict(py::arg("points") = pts, py::arg("fold") = fold, py::arg("truncated") = b.truncated);
      },
      py::arg("alpha"), py::arg("k"), py::arg("s_values"), py::arg("grid"));

  m.def("mass", &mass, py::arg("solution"));
  m.def(
      "pohozaev_report", [](const DiskSolution& s) { return to_json(pohozaev_report(s)).dump(); },
      py::arg("solution"), "JSON text of the identity terms.");
  m.def(
      "system_pohozaev_report",
      [](const std::vector<DiskSolution>& s, const Eigen::MatrixXd& a) {
        return to_json(system_pohozaev_report(s, a)).dump();
      },
      py::arg("solutions"), py::arg("a"));

  m.def(
      "liouville_certificate",
      [](double alpha, const PotentialField& k) { return to_json(liouville_certificate(alpha, k)).dump(); },
      py::arg("alpha"), py::arg("k"));
  m.def(
      "henon_certificate",
      [](double alpha, const PotentialField& k, double c0, double p0) {
        return to_json(henon_certificate(alpha, k, c0, p0)).dump();
      },
      py::arg("alpha"), py::arg("k"), py::arg("c0"), py::arg("p0"));
  m.def(
      "system_certificate",
      [](const Eigen::MatrixXd& a, std::vector<double> alphas, std::vector<PotentialField> ks) {
        return to_json(system_certificate(a, alphas, ks)).dump();
      },
      py::arg("a"), py::arg("alphas"), py::arg("ks"));
  m.def(
      "general_certificate",
      [](double c_w, double c_f, double weight_integral) {
        ConditionConstants c;
        c.c_w = c_w;
        c.c_f = c_f;
        c.weight_integral = weight_integral;
        return to_json(general_certificate(c)).dump();
      },
      py::arg("c_w"), py::arg("c_f"), py::arg("weight_integral"));

  m.def(
      "builtin_config", [](const std::string& name) { return to_json(builtin_config(name)).dump(); },
      py::arg("name"));
  m.def(
      "run_experiment",
      [](const std::string& config_json, bool write_files) {
        const ExperimentConfig c = parse_config(nlohmann::json::parse(config_json));
        py::gil_scoped_release release;
        const ExperimentReport r = run_experiment(c, write_files);
        py::gil_scoped_acquire acquire;
        return to_json(r).dump();
      },
      py::arg("config_json"), py::arg("write_files") = false);
}
