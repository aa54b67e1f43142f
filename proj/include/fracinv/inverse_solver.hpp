#pragma once

#include <string>
#include <vector>

#include "fracinv/frac_calc.hpp"
#include "fracinv/grid.hpp"
#include "fracinv/problem.hpp"
#include "fracinv/sturm_liouville.hpp"
#include "fracinv/types.hpp"

namespace fracinv {

struct CompatibilityReport {
  double g0 = 0.0;
  double integral = 0.0;          // trapezoid int phi h dx
  double series = 0.0;            // sum h_n phi_n
  double defect_integral = 0.0;   // |integral - g0|
  double defect_series = 0.0;     // |series - g0|
  double tolerance = 0.0;
  bool pass = true;

  double defect() const { return std::max(defect_integral, defect_series); }
};

/// Compares g(0) with int phi h dx and with sum h_n phi_n.
CompatibilityReport compatibility_check(const ModeCoefficients& coeffs, const ConstVectorRef& phi_samples,
                                        const ConstVectorRef& h_samples, const SpaceGrid<>& space, double g0,
                                        double tol);

/// Everything the Volterra equations need, on a uniform time grid.
///
/// First kind:  sum_{j<k} V_{k-j} fbar_j = G1(t_k)
/// Second kind: H f(t_k) + sum_{j<k} W_{k-j} fbar_j = G2(t_k)
/// with V_m = sum h_n^2 (e_{n,m-1} - e_{n,m})/lambda_n and
/// W_m = -sum h_n^2 (e_{n,m-1} - e_{n,m}) the exact panel weights of the kernels
/// t^{alpha-1} sum h_n^2 E_{alpha,alpha}(-lambda_n t^alpha) and t^{alpha-1} K0(t).
struct InverseOperands {
  TimeGrid<> time{1.0, 1};
  double alpha = 0.5;
  double H = 0.0;
  Vector lambda;  // mode-sum form of the kernels
  Vector h2;      // h_n^2
  Vector G1;
  Vector G2;
  Vector V;  // m = 0..K, V_0 = 0
  Vector W;  // m = 0..K, W_0 = 0
  double tail_H = 0.0;  // ||h||^2 - H
  double tail_W = 0.0;  // energy_form(h) - sum lambda_n h_n^2

  /// K0(t) = -sum lambda_n h_n^2 E_{alpha,alpha}(-lambda_n t^alpha).
  double kernel_K0(double t) const;
};

/// Builds the operands from observations g sampled on `time`.
/// `g_derivative`/`g_second_derivative` are used by the integration-by-parts route only.
/// Throws HypothesisError when H < 1e-14 (h vanishes identically).
InverseOperands assemble_operands(double alpha, const TimeGrid<>& time, const SpectralModel& model,
                                  const ConstVectorRef& g, CaputoMethod method,
                                  const ScalarFunction& g_derivative = {},
                                  const ScalarFunction& g_second_derivative = {});

/// Time-marching collocation with piecewise-constant f on panels.
Vector solve_second_kind(const InverseOperands& operands);

struct PicardTrace {
  Vector f;
  std::vector<double> differences;  // sup-norm of successive iterates
  bool converged = false;
  bool non_contraction = false;

  int iterations() const { return static_cast<int>(differences.size()); }
  /// Ratio of the last two differences (0 when fewer than two).
  double last_ratio() const;
};

/// Successive approximations f <- (G2 - Conv f)/H from f = G2/H or `initial`.
/// Stops at tol, at max_iter, or after three consecutive increases of the
/// difference (flagged as non-contraction, partial result kept).
PicardTrace solve_picard(const InverseOperands& operands, int max_iter, double tol,
                         const Vector* initial = nullptr);

/// max_k |sum_{j<k} V_{k-j} fbar_j - G1_k|.
double residual_first_kind(const ConstVectorRef& f, const InverseOperands& operands);

/// max_k |H f_k + sum_{j<k} W_{k-j} fbar_j - G2_k|.
double residual_second_kind(const ConstVectorRef& f, const InverseOperands& operands);

struct InverseResult {
  TimeGrid<> time{1.0, 1};
  Vector f;
  double residual_second = 0.0;
  double residual_first = 0.0;
  PicardTrace picard;
  double marching_picard_gap = 0.0;
  CompatibilityReport compatibility;
  Index modes = 0;
  double H = 0.0;
  double W = 0.0;
  double tail_H = 0.0;
  double tail_W = 0.0;
  std::vector<std::string> warnings;
};

/// Full pipeline for a spec with g: hypotheses, basis, projections,
/// compatibility, operands, marching solve, Picard cross-check, residuals.
/// Errors are prefixed with the failing stage.
InverseResult invert(const ProblemSpec& spec);

/// As above, with g given as samples on the spec's time grid instead of spec.g.
InverseResult invert(const ProblemSpec& spec, const ConstVectorRef& g_samples);

}  // namespace fracinv
