#include "fracinv/inverse_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracinv/error.hpp"
#include "fracinv/mittag_leffler.hpp"

namespace fracinv {
namespace {

// Moving average whose half-width is at most k/4 at node k, so the t^alpha
// behaviour of g near t = 0 is left unsmoothed.
Vector prefilter(const ConstVectorRef& g, Index window) {
  const Index n = g.size();
  Vector out(n);
  for (Index k = 0; k < n; ++k) {
    const Index r = std::min({window / 2, k / 4, n - 1 - k});
    out(k) = g.segment(k - r, 2 * r + 1).mean();
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// out_k = sum_{j<k} w_{k-j} d_j for k = 0..K.
Vector lag_convolve(const Vector& w, const ConstVectorRef& d) {
  const Index panels = d.size();
  Vector out = Vector::Zero(panels + 1);
  for (Index k = 1; k <= panels; ++k) out(k) = w.segment(1, k).reverse().dot(d.head(k));
  return out;
}

// Solves the first-kind system sum_{j<k} V_{k-j} rho_j = G1_k, k = 1..K, for
// panel values, then forms the nodal density and applies the second-kind operator.
Vector product_caputo(const InverseOperands& op) {
  const Index K = op.time.steps();
  Vector rho_bar(K);
  for (Index k = 1; k <= K; ++k) {
    const double history = k > 1 ? op.V.segment(2, k - 1).reverse().dot(rho_bar.head(k - 1)) : 0.0;
    rho_bar(k - 1) = (op.G1(k) - history) / op.V(1);
  }
  Vector rho(K + 1);
  if (K == 1) {
    rho.setConstant(rho_bar(0));
  } else {
    rho(0) = 1.5 * rho_bar(0) - 0.5 * rho_bar(1);
    rho(K) = 1.5 * rho_bar(K - 1) - 0.5 * rho_bar(K - 2);
    rho.segment(1, K - 1) = 0.5 * (rho_bar.head(K - 1) + rho_bar.tail(K - 1));
  }
  return op.H * rho + lag_convolve(op.W, rho_bar);
}

}  // namespace

CompatibilityReport compatibility_check(const ModeCoefficients& coeffs, const ConstVectorRef& phi_samples,
                                        const ConstVectorRef& h_samples, const SpaceGrid<>& space, double g0,
                                        double tol) {
  CompatibilityReport r;
  r.g0 = g0;
  r.integral = trapezoid_weights(space).dot(phi_samples.cwiseProduct(h_samples));
  r.series = coeffs.h.dot(coeffs.phi);
  r.defect_integral = std::abs(r.integral - g0);
  r.defect_series = std::abs(r.series - g0);
  r.tolerance = tol;
  r.pass = r.defect_integral <= tol && r.defect_series <= tol;
  return r;
}

double InverseOperands::kernel_K0(double t) const {
  double sum = 0.0;
  const double ta = std::pow(t, alpha);
  for (Index n = 0; n < lambda.size(); ++n) sum += lambda(n) * h2(n) * mittag_leffler(alpha, alpha, -lambda(n) * ta);
  return -sum;
}

InverseOperands assemble_operands(double alpha, const TimeGrid<>& time, const SpectralModel& model,
                                  const ConstVectorRef& g, CaputoMethod method, const ScalarFunction& g_derivative,
                                  const ScalarFunction& g_second_derivative) {
  const SpectralBasis& basis = model.basis;
  const ModeCoefficients& coeffs = model.coeffs;
  if (g.size() != time.size()) throw ConfigError("assemble_operands: g does not match the time grid");
  InverseOperands op;
  op.time = time;
  op.alpha = alpha;
  op.lambda = basis.eigenvalues;
  op.h2 = coeffs.h.cwiseAbs2();
  op.H = op.h2.sum();
  if (!(op.H >= 1e-14)) {
    throw HypothesisError("h must not vanish identically: sum h_n^2 = " + fmt(op.H) + " < 1e-14");
  }

  const Matrix e = mittag_leffler_table(alpha, 1.0, basis.eigenvalues, time.nodes());
  const Index K = time.steps();
  op.V = Vector::Zero(K + 1);
  op.W = Vector::Zero(K + 1);
  const Matrix drop = e.leftCols(K) - e.rightCols(K);  // e_{m-1} - e_m, m = 1..K
  op.V.tail(K) = drop.transpose() * op.h2.cwiseQuotient(basis.eigenvalues);
  op.W.tail(K) = -(drop.transpose() * op.h2);

  const Vector initial_part = e.transpose() * coeffs.h.cwiseProduct(coeffs.phi);
  op.G1 = g - initial_part;

  switch (method) {
    case CaputoMethod::kProductIntegral:
      op.G2 = product_caputo(op);
      break;
    case CaputoMethod::kL1:
      op.G2 = caputo_l1(op.G1, time.step(), alpha);
      break;
    case CaputoMethod::kByParts: {
      if (g_derivative.empty() || g_second_derivative.empty()) {
        throw ConfigError("assemble_operands: the by_parts route needs g' and g''");
      }
      const TimeSeries dg = caputo_via_lemma2(g_derivative, g_second_derivative, time, alpha);
      const Vector weights = basis.eigenvalues.cwiseProduct(coeffs.h).cwiseProduct(coeffs.phi);
      op.G2 = dg.values + e.transpose() * weights;
      break;
    }
  }

  const double h_norm2 = trapezoid_weights(model.disc.space).dot(model.disc.h.cwiseAbs2());
  op.tail_H = h_norm2 - op.H;
  try {
    op.tail_W = energy_form(model.disc.h, model.system) - coeffs.W;
  } catch (const HypothesisError&) {
    op.tail_W = std::numeric_limits<double>::quiet_NaN();
  }
  return op;
}

Vector solve_second_kind(const InverseOperands& op) {
  const Index K = op.time.steps();
  const double diag = op.H + 0.5 * op.W(1);
  if (!(std::abs(diag) > 1e-14 * op.H)) {
    throw NumericalError("solve_second_kind: vanishing diagonal coefficient at k = 1");
  }
  Vector f(K + 1);
  f(0) = op.G2(0) / op.H;
  Vector f_bar(K);
  for (Index k = 1; k <= K; ++k) {
    // panels j = 0..k-2 are complete; panel k-1 contributes W_1 (f_{k-1} + f_k)/2
    const double history = k > 1 ? op.W.segment(2, k - 1).reverse().dot(f_bar.head(k - 1)) : 0.0;
    f(k) = (op.G2(k) - history - 0.5 * op.W(1) * f(k - 1)) / diag;
    f_bar(k - 1) = 0.5 * (f(k - 1) + f(k));
  }
  if (!f.allFinite()) throw NumericalError("solve_second_kind: non-finite solution");
  return f;
}

double PicardTrace::last_ratio() const {
  const std::size_t n = differences.size();
  if (n < 2 || differences[n - 2] == 0.0) return 0.0;
  return differences[n - 1] / differences[n - 2];
}

PicardTrace solve_picard(const InverseOperands& op, int max_iter, double tol, const Vector* initial) {
  PicardTrace trace;
  trace.f = initial ? *initial : Vector(op.G2 / op.H);
  if (trace.f.size() != op.time.size()) throw ConfigError("solve_picard: initial guess does not match the grid");
  int rising = 0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector next = (op.G2 - lag_convolve(op.W, panel_means(trace.f))) / op.H;
    const double diff = (next - trace.f).cwiseAbs().maxCoeff();
    if (!trace.differences.empty() && diff > trace.differences.back()) {
      ++rising;
    } else {
      rising = 0;
    }
    trace.differences.push_back(diff);
    trace.f = next;
    if (!std::isfinite(diff)) {
      trace.non_contraction = true;
      break;
    }
    if (diff <= tol) {
      trace.converged = true;
      break;
    }
    if (rising >= 3) {
      trace.non_contraction = true;
      break;
    }
  }
  return trace;
}

double residual_first_kind(const ConstVectorRef& f, const InverseOperands& op) {
  if (f.size() != op.time.size()) throw ConfigError("residual_first_kind: f does not match the grid");
  return (lag_convolve(op.V, panel_means(f)) - op.G1).cwiseAbs().maxCoeff();
}

double residual_second_kind(const ConstVectorRef& f, const InverseOperands& op) {
  if (f.size() != op.time.size()) throw ConfigError("residual_second_kind: f does not match the grid");
  return (op.H * f + lag_convolve(op.W, panel_means(f)) - op.G2).cwiseAbs().maxCoeff();
}

InverseResult invert(const ProblemSpec& spec, const ConstVectorRef& g_samples) {
  std::ostringstream warnings;
  InverseResult result;
  result.time = TimeGrid<>(spec.T, spec.grid.K);
  const auto stage = [&](const char* name, auto&& body) {
    try {
      return body();
    } catch (const Error& e) {
      rethrow_with_stage(e, name);
    }
  };

  stage("validation", [&] {
    validate_structure(spec, Mode::kAny);
    enforce_hypotheses(check_hypotheses(spec), spec.hypotheses, &warnings);
    if (g_samples.size() != result.time.size()) throw ConfigError("g has the wrong number of samples");
    return 0;
  });
  const SpectralModel model = stage("basis", [&] { return build_spectral_model(spec); });
  result.modes = model.basis.size();
  result.H = model.coeffs.H;
  result.W = model.coeffs.W;

  Vector g = g_samples;
  if (spec.inverse.prefilter_window > 1) {
    // Only the data-driven part is smoothed; the initial-state part is known exactly.
    const Matrix e = mittag_leffler_table(spec.alpha, 1.0, model.basis.eigenvalues, result.time.nodes());
    const Vector initial_part = e.transpose() * model.coeffs.h.cwiseProduct(model.coeffs.phi);
    g = prefilter(g - initial_part, spec.inverse.prefilter_window) + initial_part;
  }

  result.compatibility = stage("compatibility", [&] {
    const double tol = spec.inverse.compat_tol + spec.noise.eps * std::abs(g(0));
    CompatibilityReport r = compatibility_check(model.coeffs, model.disc.phi, model.disc.h, model.disc.space, g(0), tol);
    if (!r.pass) {
      const std::string message = "g(0) incompatible with phi and h: |g(0) - int phi h| = " +
                                  fmt(r.defect_integral) + ", |g(0) - sum h_n phi_n| = " + fmt(r.defect_series) +
                                  ", tolerance " + fmt(tol);
      if (spec.hypotheses == HypothesisPolicy::kError) throw HypothesisError(message);
      warnings << "warning[hypothesis]: " << message << '\n';
    }
    return r;
  });

  const InverseOperands op = stage("operands", [&] {
    return assemble_operands(spec.alpha, result.time, model, g, spec.inverse.caputo, spec.g_derivative,
                             spec.g_second_derivative);
  });
  result.tail_H = op.tail_H;
  result.tail_W = op.tail_W;

  result.f = stage("solve", [&] { return solve_second_kind(op); });
  result.picard = stage("picard", [&] {
    return solve_picard(op, spec.inverse.picard_max_iter, spec.inverse.picard_tol);
  });
  if (result.picard.non_contraction) {
    warnings << "warning[numerical]: Picard iteration stopped contracting after " << result.picard.iterations()
             << " iterations\n";
  }
  result.marching_picard_gap = (result.f - result.picard.f).cwiseAbs().maxCoeff();
  result.residual_second = residual_second_kind(result.f, op);
  result.residual_first = residual_first_kind(result.f, op);

  std::istringstream lines(warnings.str());
  for (std::string line; std::getline(lines, line);) result.warnings.push_back(line);
  return result;
}

InverseResult invert(const ProblemSpec& spec) {
  try {
    validate_structure(spec, Mode::kInverse);
  } catch (const Error& e) {
    rethrow_with_stage(e, "validation");
  }
  const TimeGrid<> time(spec.T, spec.grid.K);
  Vector g;
  try {
    g = TimeSeries::sample(time, spec.g).values;
  } catch (const Error& e) {
    rethrow_with_stage(e, "sampling g");
  }
  return invert(spec, g);
}

}  // namespace fracinv
