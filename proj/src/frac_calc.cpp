#include "fracinv/frac_calc.hpp"

#include <cmath>

#include "fracinv/error.hpp"
#include "fracinv/special.hpp"

namespace fracinv {
namespace {

void require_order(double alpha, double lo_exclusive, double hi, bool hi_inclusive, const char* what) {
  const bool ok = alpha > lo_exclusive && (hi_inclusive ? alpha <= hi : alpha < hi);
  if (!ok) {
    throw ConfigError(std::string(what) + ": alpha must lie in (0," + (hi_inclusive ? "1]" : "1)") + ", got " +
                      std::to_string(alpha));
  }
}

}  // namespace

TimeSeries::TimeSeries(TimeGrid<> g, Vector v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ConfigError("time series: expected " + std::to_string(grid.size()) + " samples, got " +
                      std::to_string(values.size()));
  }
  if (!values.allFinite()) throw NumericalError("time series: non-finite sample");
}

TimeSeries TimeSeries::sample(const TimeGrid<>& grid, const ScalarFunction& f) {
  Vector v(grid.size());
  for (Index k = 0; k < grid.size(); ++k) v(k) = f(grid.node(k));
  return TimeSeries(grid, std::move(v));
}

Vector caputo_l1(const ConstVectorRef& values, double step, double alpha) {
  require_order(alpha, 0.0, 1.0, false, "caputo_l1");
  const Index n = values.size();
  Vector b(n);
  for (Index j = 0; j < n; ++j) b(j) = std::pow(j + 1.0, 1.0 - alpha) - std::pow(double(j), 1.0 - alpha);
  Vector diff(n);
  diff(0) = 0.0;
  for (Index k = 1; k < n; ++k) diff(k) = values(k) - values(k - 1);
  const double scale = std::pow(step, -alpha) * rgamma(2.0 - alpha);
  Vector out = Vector::Zero(n);
  for (Index k = 1; k < n; ++k) {
    // sum_{j=0}^{k-1} b_j diff_{k-j}
    out(k) = scale * b.head(k).dot(diff.segment(1, k).reverse());
  }
  return out;
}

TimeSeries caputo_l1(const TimeSeries& series, double alpha) {
  return TimeSeries(series.grid, caputo_l1(series.values, series.grid.step(), alpha));
}

Vector rl_integral(const ConstVectorRef& values, double step, double order) {
  if (!(order > 0.0)) throw ConfigError("rl_integral: order must be positive");
  const Index n = values.size();
  const double a1 = order + 1.0;
  // c_m = (m+1)^{a+1} - 2 m^{a+1} + (m-1)^{a+1} for interior weights at lag m.
  Vector pw(n + 1);
  for (Index m = 0; m <= n; ++m) pw(m) = std::pow(double(m), a1);
  const double scale = std::pow(step, order) * rgamma(order + 2.0);
  Vector out = Vector::Zero(n);
  for (Index k = 1; k < n; ++k) {
    const double first = pw(k - 1) - (double(k) - 1.0 - order) * std::pow(double(k), order);
    double sum = first * values(0) + values(k);
    for (Index j = 1; j < k; ++j) {
      const Index m = k - j;
      sum += (pw(m + 1) - 2.0 * pw(m) + pw(m - 1)) * values(j);
    }
    out(k) = scale * sum;
  }
  return out;
}

TimeSeries rl_integral(const TimeSeries& series, double alpha) {
  require_order(alpha, 0.0, 1.0, true, "rl_integral");
  return TimeSeries(series.grid, rl_integral(series.values, series.grid.step(), alpha));
}

TimeSeries caputo_via_lemma2(const ScalarFunction& f, const ScalarFunction& derivative, const TimeGrid<>& grid,
                             double alpha) {
  require_order(alpha, 0.0, 1.0, false, "caputo_via_lemma2");
  const TimeSeries df = TimeSeries::sample(grid, derivative);
  Vector out = rl_integral(df.values, grid.step(), 2.0 - alpha);
  const double f0 = f(0.0);
  const double scale = f0 * rgamma(2.0 - alpha);
  for (Index k = 1; k < grid.size(); ++k) out(k) += scale * std::pow(grid.node(k), 1.0 - alpha);
  return TimeSeries(grid, std::move(out));
}

Vector moving_average(const ConstVectorRef& values, Index window) {
  if (window < 1 || window % 2 == 0) throw ConfigError("moving_average: window must be a positive odd integer");
  const Index n = values.size();
  const Index half = window / 2;
  Vector out(n);
  for (Index k = 0; k < n; ++k) {
    const Index r = std::min({half, k, n - 1 - k});
    out(k) = values.segment(k - r, 2 * r + 1).mean();
  }
  return out;
}

}  // namespace fracinv
