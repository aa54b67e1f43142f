#pragma once

#include "fracinv/expr.hpp"
#include "fracinv/grid.hpp"
#include "fracinv/types.hpp"

namespace fracinv {

/// Samples v_0..v_K on a uniform time grid.
struct TimeSeries {
  TimeGrid<> grid;
  Vector values;

  TimeSeries(TimeGrid<> g, Vector v);

  /// Samples a function at every grid node.
  static TimeSeries sample(const TimeGrid<>& grid, const ScalarFunction& f);

  Index size() const { return values.size(); }
  double operator[](Index k) const { return values(k); }
};

/// L1 approximation of the Caputo derivative of order alpha in (0,1):
/// tau^{-alpha}/Gamma(2-alpha) sum_j b_j (v_{k-j} - v_{k-j-1}), b_j = (j+1)^{1-alpha} - j^{1-alpha}.
/// The value at t_0 is 0.
Vector caputo_l1(const ConstVectorRef& values, double step, double alpha);
TimeSeries caputo_l1(const TimeSeries& series, double alpha);

/// Riemann-Liouville integral of order alpha > 0 by product trapezoid weights
/// (exact for piecewise-linear data).
Vector rl_integral(const ConstVectorRef& values, double step, double order);

/// Riemann-Liouville integral of order alpha in (0,1].
TimeSeries rl_integral(const TimeSeries& series, double alpha);

/// I^{1-alpha} f from f(0) and f' via integration by parts:
/// (1/Gamma(2-alpha)) [f(0) t^{1-alpha} + int_0^t f'(s) (t-s)^{1-alpha} ds],
/// the integral by product trapezoid on the grid. With f = g' this is the
/// Caputo derivative of g.
TimeSeries caputo_via_lemma2(const ScalarFunction& f, const ScalarFunction& derivative, const TimeGrid<>& grid,
                             double alpha);

/// Centred moving average over an odd window, shrinking symmetrically at the ends.
Vector moving_average(const ConstVectorRef& values, Index window);

/// Panel averages (v_j + v_{j+1})/2, j = 0..K-1.
template <typename Derived>
Vector panel_means(const Eigen::MatrixBase<Derived>& values) {
  const Index k = values.size() - 1;
  return 0.5 * (values.head(k) + values.tail(k));
}

}  // namespace fracinv
