#include "fracinv/direct_solver.hpp"

#include <cmath>
#include <iostream>

#include "fracinv/error.hpp"
#include "fracinv/mittag_leffler.hpp"
#include "fracinv/special.hpp"

namespace fracinv {

Vector ConvolutionWeights::convolve(const ConstVectorRef& density) const {
  const Index panels = density.size();
  if (panels + 1 != weights.size()) throw ConfigError("convolve: density does not match the time grid");
  Vector out = Vector::Zero(panels + 1);
  for (Index k = 1; k <= panels; ++k) {
    // sum_{j=0}^{k-1} w_{k-j} d_j
    out(k) = weights.segment(1, k).reverse().dot(density.head(k));
  }
  return out;
}

ConvolutionWeights convolution_weights_from_relaxation(double lambda, double alpha, const TimeGrid<>& grid,
                                                       Vector relaxation) {
  if (!(lambda >= 0.0)) throw ConfigError("convolution_weights: lambda must be nonnegative");
  const Index n = grid.size();
  if (relaxation.size() != n) throw ConfigError("convolution_weights: relaxation row does not match the grid");
  ConvolutionWeights cw{lambda, std::move(relaxation), Vector::Zero(n)};
  if (lambda == 0.0) {
    const double scale = rgamma(alpha + 1.0);
    for (Index m = 1; m < n; ++m) {
      cw.weights(m) = scale * (std::pow(grid.node(m), alpha) - std::pow(grid.node(m - 1), alpha));
    }
  } else {
    for (Index m = 1; m < n; ++m) cw.weights(m) = (cw.relaxation(m - 1) - cw.relaxation(m)) / lambda;
  }
  return cw;
}

ConvolutionWeights convolution_weights(double lambda, double alpha, const TimeGrid<>& grid) {
  if (!(lambda >= 0.0)) throw ConfigError("convolution_weights: lambda must be nonnegative");
  Vector e(grid.size());
  for (Index m = 0; m < grid.size(); ++m) e(m) = mittag_leffler(alpha, 1.0, -lambda * std::pow(grid.node(m), alpha));
  return convolution_weights_from_relaxation(lambda, alpha, grid, std::move(e));
}

Vector mode_evolution(double phi_n, double h_n, const ConvolutionWeights& weights, const TimeSeries& f) {
  if (f.size() != weights.weights.size()) throw ConfigError("mode_evolution: f does not match the grid");
  Vector u = phi_n * weights.relaxation;
  if (h_n != 0.0) u += h_n * weights.convolve(panel_means(f.values));
  return u;
}

DirectSolution solve_direct(const ProblemSpec& spec, const SpectralBasis& basis, const ModeCoefficients& coeffs) {
  validate_structure(spec, Mode::kDirect);
  if (coeffs.size() != basis.size()) throw ConfigError("solve_direct: basis and coefficients differ in size");
  const TimeGrid<> time(spec.T, spec.grid.K);
  const TimeSeries f = TimeSeries::sample(time, spec.f);
  DirectSolution sol{basis, coeffs, time,
                     mittag_leffler_table(spec.alpha, 1.0, basis.eigenvalues, time.nodes()),
                     Matrix(basis.size(), time.size())};
  for (Index n = 0; n < basis.size(); ++n) {
    const ConvolutionWeights w =
        convolution_weights_from_relaxation(basis.eigenvalues(n), spec.alpha, time, sol.relaxation.row(n).transpose());
    sol.amplitudes.row(n) = mode_evolution(coeffs.phi(n), coeffs.h(n), w, f).transpose();
  }
  return sol;
}

DirectSolution solve_direct(const ProblemSpec& spec) {
  validate_structure(spec, Mode::kDirect);
  enforce_hypotheses(check_hypotheses(spec), spec.hypotheses, &std::cerr);
  const SpectralModel model = build_spectral_model(spec);
  return solve_direct(spec, model.basis, model.coeffs);
}

}  // namespace fracinv
