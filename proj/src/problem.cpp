#include "fracinv/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracinv/error.hpp"

namespace fracinv {
namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

void require_function(const ScalarFunction& f, const char* name) {
  if (f.empty()) throw ConfigError(std::string("missing field '") + name + "'");
}

}  // namespace

std::string_view to_string(CaputoMethod method) {
  switch (method) {
    case CaputoMethod::kProductIntegral:
      return "product";
    case CaputoMethod::kL1:
      return "l1";
    case CaputoMethod::kByParts:
      return "by_parts";
  }
  return "product";
}

CaputoMethod caputo_method_from_string(std::string_view name) {
  if (name == "product") return CaputoMethod::kProductIntegral;
  if (name == "l1") return CaputoMethod::kL1;
  if (name == "by_parts") return CaputoMethod::kByParts;
  throw ConfigError("inverse.caputo must be one of product, l1, by_parts; got '" + std::string(name) + "'");
}

void validate_structure(const ProblemSpec& spec, Mode mode) {
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    throw ConfigError("alpha must lie in (0,1), got " + fmt(spec.alpha));
  }
  if (!(spec.l > 0.0) || !std::isfinite(spec.l)) throw ConfigError("l must be positive, got " + fmt(spec.l));
  if (!(spec.T > 0.0) || !std::isfinite(spec.T)) throw ConfigError("T must be positive, got " + fmt(spec.T));
  if (spec.grid.M < 3) throw ConfigError("grid.M must be at least 3");
  if (spec.grid.K < 1) throw ConfigError("grid.K must be at least 1");
  if (spec.grid.N && (*spec.grid.N < 1 || *spec.grid.N > spec.grid.M)) {
    throw ConfigError("grid.N must lie in [1, M]");
  }
  if (!(spec.noise.eps >= 0.0)) throw ConfigError("noise.eps must be nonnegative");
  require_function(spec.p, "p");
  require_function(spec.q, "q");
  require_function(spec.phi, "phi");
  require_function(spec.h, "h");
  if (spec.has_f() && spec.has_g()) throw ConfigError("exactly one of f, g must be given, found both");
  if (mode == Mode::kDirect && !spec.has_f()) throw ConfigError("missing field 'f' (direct mode needs a source)");
  if (mode == Mode::kInverse && !spec.has_g()) throw ConfigError("missing field 'g' (inverse mode needs data)");
  if (mode == Mode::kAny && !spec.has_f() && !spec.has_g()) throw ConfigError("exactly one of f, g must be given");
  if (spec.inverse.prefilter_window < 1 || spec.inverse.prefilter_window % 2 == 0) {
    throw ConfigError("inverse.prefilter_window must be a positive odd integer");
  }
  if (spec.inverse.caputo == CaputoMethod::kByParts && mode == Mode::kInverse &&
      (spec.g_derivative.empty() || spec.g_second_derivative.empty())) {
    throw ConfigError("inverse.caputo = by_parts needs g_derivative and g_second_derivative");
  }
}

std::vector<HypothesisCheck> check_hypotheses(const ProblemSpec& spec) {
  const SpaceGrid<> grid(spec.l, spec.grid.M);
  std::vector<HypothesisCheck> out;

  double p_min = std::numeric_limits<double>::infinity();
  double p_at = 0.0;
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    if (const double v = spec.p(x); v < p_min) p_min = v, p_at = x;
  }
  for (Index i = 0; i <= grid.interior(); ++i) {
    const double x = grid.half_node(i);
    if (const double v = spec.p(x); v < p_min) p_min = v, p_at = x;
  }
  out.push_back({"coefficients: p > 0", p_min, 0.0, p_min > 0.0, "min p = " + fmt(p_min) + " at x = " + fmt(p_at)});

  double q_min = std::numeric_limits<double>::infinity();
  double q_at = 0.0;
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    if (const double v = spec.q(x); v < q_min) q_min = v, q_at = x;
  }
  out.push_back({"coefficients: q >= 0", q_min, 0.0, q_min >= 0.0, "min q = " + fmt(q_min) + " at x = " + fmt(q_at)});

  const double tol = 1e-10;
  const auto boundary = [&](const ScalarFunction& f, const char* name) {
    const double v = std::max(std::abs(f(0.0)), std::abs(f(spec.l)));
    out.push_back({std::string(name) + "(0) = " + name + "(l) = 0", v, tol, v <= tol,
                   std::string(name) + "(0) = " + fmt(f(0.0)) + ", " + name + "(l) = " + fmt(f(spec.l))});
  };
  boundary(spec.phi, "phi");
  boundary(spec.h, "h");
  return out;
}

void enforce_hypotheses(const std::vector<HypothesisCheck>& checks, HypothesisPolicy policy,
                        std::ostream* warnings) {
  for (const auto& c : checks) {
    if (c.pass) continue;
    const std::string message = "hypothesis '" + c.name + "' violated: " + c.detail;
    if (policy == HypothesisPolicy::kError) throw HypothesisError(message);
    if (warnings) *warnings << "warning[hypothesis]: " << message << '\n';
  }
}

Discretization discretize(const ProblemSpec& spec) {
  const SpaceGrid<> space(spec.l, spec.grid.M);
  const TimeGrid<> time(spec.T, spec.grid.K);
  Discretization d{space, time, Vector(space.interior() + 1), Vector(space.size()), Vector(space.size()),
                   Vector(space.size())};
  for (Index i = 0; i <= space.interior(); ++i) d.p_half(i) = spec.p(space.half_node(i));
  for (Index i = 0; i < space.size(); ++i) {
    const double x = space.node(i);
    d.q(i) = spec.q(x);
    d.phi(i) = spec.phi(x);
    d.h(i) = spec.h(x);
  }
  return d;
}

SpectralModel build_spectral_model(const ProblemSpec& spec) {
  Discretization disc = discretize(spec);
  TridiagonalSystem system = assemble_operator(disc.p_half, disc.q, disc.space);
  const Index computed = spec.grid.N ? *spec.grid.N : std::min<Index>(kMaxAutoModes, spec.grid.M);
  SpectralBasis basis = solve_eigs(system, computed);
  ModeCoefficients coeffs = mode_coefficients(basis, disc.phi, disc.h);
  if (!spec.grid.N) {
    const Index n = select_mode_count(basis, coeffs, kModeTailThreshold);
    coeffs = truncate(coeffs, basis, n);
    basis = truncate(basis, n);
  }
  return {std::move(disc), std::move(system), std::move(basis), std::move(coeffs), computed};
}

}  // namespace fracinv
