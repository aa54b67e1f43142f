#include "fracinv/mittag_leffler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fracinv/error.hpp"
#include "fracinv/quadrature.hpp"
#include "fracinv/special.hpp"

namespace fracinv {
namespace {

constexpr double kSeriesLimit = 2.0;       // on |z|^{1/alpha}
constexpr double kAsymptoticLimit = 60.0;  // on |z|^{1/alpha}
constexpr double kIntegralCutoff = 70.0;   // e^{-70} is below double resolution

double series(double alpha, double beta, double z) {
  double sum = 0.0;
  double carry = 0.0;  // Kahan compensation
  double power = 1.0;
  for (int k = 0; k < 2000; ++k) {
    const double term = power * rgamma(alpha * k + beta);
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    if (alpha * k + beta > 3.0 && std::abs(term) <= 1e-17 * std::abs(sum)) break;
    power *= z;
  }
  return sum;
}

double asymptotic(double alpha, double beta, double z) {
  const double x = -z;
  double sum = 0.0;
  double power = 1.0;
  double previous_envelope = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 500; ++k) {
    power /= z;
    const double arg = beta - alpha * k;
    // |1/Gamma(arg)| <= Gamma(1 - arg)/pi for arg < 1/2; track its growth.
    const double envelope =
        arg < 0.5 ? -k * std::log(x) + log_abs_gamma(1.0 - arg) : -k * std::log(x) - log_abs_gamma(arg);
    if (k > 1 && envelope > previous_envelope) break;
    previous_envelope = envelope;
    const double term = power * rgamma(arg);
    sum -= term;
    if (std::exp(envelope) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double integral(double alpha, double beta, double x) {
  const double s_beta = sin_pi(beta);
  const double s_shift = sin_pi(beta - alpha);
  const double c_alpha = std::cos(std::numbers::pi * alpha);
  const double s_alpha = sin_pi(alpha);
  const double gamma_exp = (1.0 - beta) / alpha;
  const double inv_alpha = 1.0 / alpha;
  const double upper = std::pow(kIntegralCutoff, alpha);

  // u = upper * s^m removes the integrable endpoint singularity when beta > 1.
  const int m = gamma_exp < 0.0 ? std::min(8, static_cast<int>(std::ceil(1.0 / (1.0 + gamma_exp)))) : 1;

  auto integrand_u = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double shifted = u + x * c_alpha;
    const double imag = x * s_alpha;
    return std::exp(-std::pow(u, inv_alpha)) * std::pow(u, gamma_exp) * (u * s_beta + x * s_shift) /
           (shifted * shifted + imag * imag);
  };
  auto integrand = [&](double s) {
    if (m == 1) return upper * integrand_u(upper * s);
    if (s <= 0.0) return 0.0;
    const double u = upper * std::pow(s, m);
    return integrand_u(u) * upper * m * std::pow(s, m - 1);
  };

  std::array<double, 1> breaks{};
  std::span<const double> breakpoints;
  if (c_alpha < 0.0 && -x * c_alpha < upper) {
    breaks[0] = std::pow(-x * c_alpha / upper, 1.0 / m);
    breakpoints = breaks;
  }
  const QuadratureResult r = integrate(integrand, 0.0, 1.0, breakpoints, 1e-14, 0.0, 4000);
  if (!(std::abs(r.error) <= 1e-10 * std::abs(r.value)) && !(r.error < 1e-300)) {
    throw NumericalError("mittag_leffler: quadrature did not converge for alpha=" + std::to_string(alpha) +
                         ", beta=" + std::to_string(beta) + ", z=" + std::to_string(-x));
  }
  return r.value / (alpha * std::numbers::pi);
}

double evaluate(double alpha, double beta, double z) {
  if (z == 0.0) return rgamma(beta);
  const double x = -z;
  const double w = std::pow(x, 1.0 / alpha);
  if (w <= kSeriesLimit) return series(alpha, beta, z);
  if (alpha == 1.0) {
    double value = std::exp(z);
    for (double b = 1.0; b < beta; b += 1.0) value = (value - rgamma(b)) / z;
    return value;
  }
  if (beta >= 1.0 + alpha) return (evaluate(alpha, beta - alpha, z) - rgamma(beta - alpha)) / z;
  if (w >= kAsymptoticLimit) return asymptotic(alpha, beta, z);
  return integral(alpha, beta, x);
}

}  // namespace

double mittag_leffler(double alpha, double beta, double z) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ConfigError("mittag_leffler: alpha must lie in (0,1], got " + std::to_string(alpha));
  }
  if (!std::isfinite(beta)) throw ConfigError("mittag_leffler: beta must be finite");
  if (!(z <= 0.0) || !std::isfinite(z)) {
    throw ConfigError("mittag_leffler: only finite z <= 0 is supported, got " + std::to_string(z));
  }
  if (alpha == 1.0 && !(beta >= 1.0 && beta == std::floor(beta))) {
    throw ConfigError("mittag_leffler: alpha = 1 requires an integer beta >= 1");
  }
  return evaluate(alpha, beta, z);
}

Matrix mittag_leffler_table(double alpha, double beta, const ConstVectorRef& lambda,
                            const ConstVectorRef& t) {
  Matrix out(lambda.size(), t.size());
  for (Index k = 0; k < t.size(); ++k) {
    if (!(t(k) >= 0.0)) throw ConfigError("mittag_leffler_table: times must be nonnegative");
    const double t_alpha = std::pow(t(k), alpha);
    for (Index n = 0; n < lambda.size(); ++n) {
      if (!(lambda(n) >= 0.0)) throw ConfigError("mittag_leffler_table: lambda must be nonnegative");
      out(n, k) = mittag_leffler(alpha, beta, -lambda(n) * t_alpha);
    }
  }
  return out;
}

}  // namespace fracinv
