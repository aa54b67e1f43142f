#pragma once

#include "fracinv/frac_calc.hpp"
#include "fracinv/grid.hpp"
#include "fracinv/problem.hpp"
#include "fracinv/sturm_liouville.hpp"
#include "fracinv/types.hpp"

namespace fracinv {

/// Exact product-integration weights of the kernel s^{alpha-1} E_{alpha,alpha}(-lambda s^alpha)
/// against a density that is constant on each panel. The weight of panel j at
/// node k depends only on the lag m = k - j:
///   w_m = (e_{m-1} - e_m)/lambda,  e_m = E_{alpha,1}(-lambda (m tau)^alpha),
/// and for lambda = 0, w_m = ((m tau)^alpha - ((m-1) tau)^alpha)/Gamma(alpha+1).
struct ConvolutionWeights {
  double lambda = 0.0;
  Vector relaxation;  // e_m, m = 0..K
  Vector weights;     // w_m, m = 0..K, w_0 = 0

  /// sum_{j<k} w_{k-j} density_j for every k = 0..K (density has K panel values).
  Vector convolve(const ConstVectorRef& density) const;
};

ConvolutionWeights convolution_weights(double lambda, double alpha, const TimeGrid<>& grid);

/// Weights from a precomputed relaxation row e_m.
ConvolutionWeights convolution_weights_from_relaxation(double lambda, double alpha, const TimeGrid<>& grid,
                                                       Vector relaxation);

/// u_n(t_k) = phi_n e_k + h_n sum_j w_{k-j} fbar_j with fbar_j the panel means of f.
Vector mode_evolution(double phi_n, double h_n, const ConvolutionWeights& weights, const TimeSeries& f);

/// Mode amplitudes of the spectral solution, one row per mode, one column per time node.
struct DirectSolution {
  SpectralBasis basis;
  ModeCoefficients coeffs;
  TimeGrid<> time;
  Matrix relaxation;  // E_{alpha,1}(-lambda_n t_k^alpha)
  Matrix amplitudes;  // u_n(t_k)

  /// u(t_k, x_i), one row per time node, one column per space node.
  Matrix field() const { return amplitudes.transpose() * basis.modes.transpose(); }
};

DirectSolution solve_direct(const ProblemSpec& spec, const SpectralBasis& basis, const ModeCoefficients& coeffs);

/// Validates the spec (direct mode), builds the spectral model and solves.
DirectSolution solve_direct(const ProblemSpec& spec);

/// g(t_k) = sum_n h_n u_n(t_k).
template <typename Derived>
Vector observe(const Eigen::MatrixBase<Derived>& amplitudes, const ConstVectorRef& h) {
  if (amplitudes.rows() != h.size()) throw ConfigError("observe: mode counts differ");
  return amplitudes.transpose() * h;
}

}  // namespace fracinv
