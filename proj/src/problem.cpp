#include "confmass/problem.hpp"

#include <cmath>
#include <sstream>

#include "confmass/error.hpp"

namespace confmass {

std::string_view problem_name(const ProblemSpec& problem) {
  struct Visitor {
    std::string_view operator()(const LiouvilleProblem&) const { return "liouville"; }
    std::string_view operator()(const HenonProblem&) const { return "henon"; }
    std::string_view operator()(const SystemProblem&) const { return "system"; }
    std::string_view operator()(const GeneralProblem&) const { return "general"; }
  };
  return std::visit(Visitor{}, problem);
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha))
    fail(ErrorCode::InvalidParameter, "alpha must exceed -1");
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    fail(ErrorCode::InvalidParameter, "lambda must be nonnegative");
}

}  // namespace

void validate(const ProblemSpec& problem) {
  if (const auto* l = std::get_if<LiouvilleProblem>(&problem)) {
    check_lambda(l->lambda);
    check_alpha(l->alpha);
  } else if (const auto* h = std::get_if<HenonProblem>(&problem)) {
    if (!(h->p > 1.0) || !std::isfinite(h->p)) fail(ErrorCode::InvalidParameter, "p must exceed 1");
    check_alpha(h->alpha);
  } else if (const auto* s = std::get_if<SystemProblem>(&problem)) {
    const auto n = static_cast<Eigen::Index>(s->lambda.size());
    if (n < 1) fail(ErrorCode::InvalidParameter, "system needs at least one component");
    if (s->a.rows() != n || s->a.cols() != n || s->alpha.size() != s->lambda.size() ||
        s->k.size() != s->lambda.size()) {
      std::ostringstream os;
      os << "system sizes disagree: A is " << s->a.rows() << "x" << s->a.cols() << ", "
         << s->lambda.size() << " lambdas, " << s->alpha.size() << " alphas, " << s->k.size()
         << " potentials";
      fail(ErrorCode::InvalidParameter, os.str());
    }
    for (double l : s->lambda) check_lambda(l);
    for (double a : s->alpha) check_alpha(a);
  } else if (const auto* g = std::get_if<GeneralProblem>(&problem)) {
    check_alpha(g->alpha);
    if (!g->nonlinearity.f || !g->nonlinearity.df)
      fail(ErrorCode::InvalidParameter, "general problem needs F and F'");
  }
}

Nonlinearity exp_power_nonlinearity(double lambda, double p) {
  if (!(p > 0.0) || !(lambda > 0.0))
    fail(ErrorCode::InvalidParameter, "exp_power nonlinearity needs lambda > 0 and p > 0");
  Nonlinearity n;
  std::ostringstream os;
  os << "exp_power(lambda=" << lambda << ", p=" << p << ")";
  n.name = os.str();
  n.f = [lambda, p](double u) { return u <= 0.0 ? 0.0 : lambda / p * std::expm1(std::pow(u, p)); };
  n.df = [lambda, p](double u) {
    return u <= 0.0 ? 0.0 : lambda * std::pow(u, p - 1.0) * std::exp(std::pow(u, p));
  };
  n.d2f = [lambda, p](double u) {
    if (u <= 0.0) return 0.0;
    const double up = std::pow(u, p);
    return lambda * std::exp(up) * ((p - 1.0) * std::pow(u, p - 2.0) + p * std::pow(u, 2.0 * p - 2.0));
  };
  return n;
}

Nonlinearity exponential_nonlinearity() {
  return {"exponential", [](double u) { return std::expm1(u); }, [](double u) { return std::exp(u); },
          [](double u) { return std::exp(u); }};
}

Nonlinearity linear_nonlinearity() {
  return {"linear", [](double u) { return u; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

}  // namespace confmass
